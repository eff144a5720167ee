"""Complex-wavelet antialiasing toolkit.

Dual-tree wavelet packet filter banks, the RMax and CMod first-layer
operators, wavelet-block assembly, shift-robustness metrics and
closed-form compute/memory cost models.
"""

__version__ = "1.0.0"

from .filters import FilterPair, load_filter_pair, available_filter_pairs
from .wpt import wpt_forward, wpt_inverse
from .packetbank import PacketBank, build_packet_bank
from .spectral import hilbert2d, kernel_spectrum
from .ops import (cross_correlate, subsample, conv_layer, relu, bias_relu,
                  max_pool, modulus, rmax, cmod, blur_pool)
from .twinblock import (TwinConfig, MixGroup, load_config, luminance,
                        dt_features, complex_packet_features, select_permute,
                        group_mix, sparsity_penalty, sparsity_penalty_grad,
                        one_hot_mixing, wblock_forward, cwblock_forward, bn0,
                        verify_prop1, verify_prop2, prop1_eligible,
                        prop2_eligible, synthetic_bandlimited_kernel)
from .metrics import (ShiftProbe, ConsistencyReport, extract_shifted_patches,
                      kl_divergence, mean_flip_rate, feature_consistency)
from .costmodel import (OpCosts, CostSpec, pipeline_flops, mem_footprint,
                        mem_footprint_closed, cost_table)

__all__ = [
    "FilterPair", "load_filter_pair", "available_filter_pairs",
    "wpt_forward", "wpt_inverse",
    "PacketBank", "build_packet_bank",
    "hilbert2d", "kernel_spectrum",
    "cross_correlate", "subsample", "conv_layer", "relu", "bias_relu",
    "max_pool", "modulus", "rmax", "cmod", "blur_pool",
    "TwinConfig", "MixGroup", "load_config", "luminance", "dt_features",
    "complex_packet_features", "select_permute", "group_mix",
    "sparsity_penalty", "sparsity_penalty_grad", "one_hot_mixing",
    "wblock_forward", "cwblock_forward", "bn0",
    "verify_prop1", "verify_prop2", "prop1_eligible", "prop2_eligible",
    "synthetic_bandlimited_kernel",
    "ShiftProbe", "ConsistencyReport", "extract_shifted_patches",
    "kl_divergence", "mean_flip_rate", "feature_consistency",
    "OpCosts", "CostSpec", "pipeline_flops", "mem_footprint",
    "mem_footprint_closed", "cost_table",
]
