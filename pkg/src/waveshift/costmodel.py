"""Closed-form FLOPs and activation-memory models for first-layer variants.

All quantities are per input image and per output channel. Layer chains:

AlexNet-style (no normalization layer)
  std :  Conv(m)            -> Bias -> ReLU -> MaxPool(3, 2)
  blur:  Conv(m/2)          -> Bias -> ReLU -> BlurPool -> Max(3, 1) -> BlurPool
  cmod:  CConv(2m)          -> Modulus -> Bias -> ReLU

ResNet-style (normalization after the convolution)
  std :  Conv(m) -> BN -> Bias -> ReLU -> MaxPool(3, 2)
  blur:  Conv(m) -> BN -> Bias -> ReLU -> Max(3, 1) -> BlurPool
  ablur: Conv(m) -> BN -> Bias -> ReLU -> Max(3, 1) -> ABlurPool
  cmod:  CConv(2m) -> Modulus -> BN0 -> Bias -> ReLU

Memory counts the intermediate and output tensors retained for the
backward pass: layer inputs for Conv/BN/Bias/pooling/Modulus, outputs for
ReLU/Softmax, index tensors twice (64-bit), normalization metric vectors
(four scalars per channel, two for running statistics without centering),
and complex maps as two floats per entry.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "OpCosts", "CostSpec", "flops_conv", "flops_cconv", "flops_bias",
    "flops_relu", "flops_maxpool", "flops_modulus", "flops_bn", "flops_blur",
    "flops_ablur", "pipeline_flops", "mem_items", "mem_footprint",
    "mem_footprint_closed", "cost_table", "ARCHS", "VARIANTS",
]

ARCHS = ("alexnet", "resnet")
VARIANTS = ("std", "blur", "ablur", "cmod")


@dataclass(frozen=True)
class OpCosts:
    """Relative per-element operation times, normalized to one addition."""

    t_sum: float = 1.0
    t_prod: float = 1.0
    t_exp: float = 0.75
    t_mod: float = 3.5
    t_relu: float = 0.75
    t_maxpool: float = 12.0

    def __post_init__(self):
        for name in ("t_sum", "t_prod", "t_exp", "t_mod", "t_relu", "t_maxpool"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class CostSpec:
    """Shape description of one first layer."""

    arch: str
    K: int = 3          # input channels
    L: int = 64         # output channels
    N: int = 224        # input height and width
    m_bl: int = 3       # blur filter size
    L_group: int = 8    # channels sharing one adaptive blur filter

    def __post_init__(self):
        if self.arch not in ARCHS:
            raise ValueError(f"arch must be one of {ARCHS}, got {self.arch!r}")
        for name in ("K", "L", "N", "m_bl", "L_group"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")

    @property
    def m(self):
        return 4 if self.arch == "alexnet" else 2

    @property
    def m_filt(self):
        return 11 if self.arch == "alexnet" else 7


def _check_size(n_out):
    if n_out < 1:
        raise ValueError("output size must be positive")


def flops_conv(spec, costs, n_out):
    """Real convolution: K m_f^2 products and K m_f^2 - 1 sums per unit."""
    _check_size(n_out)
    taps = spec.K * spec.m_filt ** 2
    return n_out ** 2 * ((taps - 1) * costs.t_sum + taps * costs.t_prod)


def flops_cconv(spec, costs, n_out):
    """Complex convolution on a real input: twice the real tap work."""
    _check_size(n_out)
    taps = spec.K * spec.m_filt ** 2
    return 2.0 * n_out ** 2 * ((taps - 1) * costs.t_sum + taps * costs.t_prod)


def flops_bias(spec, costs, n_out):
    _check_size(n_out)
    return n_out ** 2 * costs.t_sum


def flops_relu(spec, costs, n_out):
    _check_size(n_out)
    return n_out ** 2 * costs.t_relu


def flops_maxpool(spec, costs, n_out):
    _check_size(n_out)
    return n_out ** 2 * costs.t_maxpool


def flops_modulus(spec, costs, n_out):
    _check_size(n_out)
    return n_out ** 2 * costs.t_mod


def flops_bn(spec, costs, n_out):
    """Mean, variance and affine application: 4 sums + 3 products per unit."""
    _check_size(n_out)
    return n_out ** 2 * (4.0 * costs.t_sum + 3.0 * costs.t_prod)


def flops_blur(spec, costs, n_out):
    _check_size(n_out)
    taps = spec.m_bl ** 2
    return n_out ** 2 * ((taps - 1) * costs.t_sum + taps * costs.t_prod)


def flops_ablur(spec, costs, n_out):
    """Adaptive blur pooling: filter generation, normalization, softmax, blur.

    Four stages per output channel; the generation convolution carries the
    L m_bl^2 tap work spread over L_group channels, which makes the whole
    layer quartic in the blur size.
    """
    _check_size(n_out)
    t = costs
    g = spec.m_bl ** 2 / spec.L_group
    taps = spec.L * spec.m_bl ** 2
    gen = n_out ** 2 * g * ((taps - 1) * t.t_sum + taps * t.t_prod)
    norm = n_out ** 2 * g * (4.0 * t.t_sum + 3.0 * t.t_prod)
    softmax = n_out ** 2 * g * (t.t_exp + t.t_sum + t.t_prod)
    apply_blur = flops_blur(spec, t, n_out)
    return gen + norm + softmax + apply_blur


def pipeline_flops(arch, variant, spec=None, costs=None):
    """Total per-channel FLOPs of one first-layer variant."""
    spec = spec if spec is not None else CostSpec(arch)
    costs = costs if costs is not None else OpCosts()
    if spec.arch != arch:
        spec = CostSpec(arch, spec.K, spec.L, spec.N, spec.m_bl, spec.L_group)
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    N, m = spec.N, spec.m
    conv_out, pool_out, mod_out = N // m, N // (2 * m), N // (2 * m)
    if arch == "alexnet":
        if variant == "std":
            parts = [flops_conv(spec, costs, conv_out),
                     flops_bias(spec, costs, conv_out),
                     flops_relu(spec, costs, conv_out),
                     flops_maxpool(spec, costs, pool_out)]
        elif variant == "blur":
            wide = 2 * N // m
            parts = [flops_conv(spec, costs, wide),
                     flops_bias(spec, costs, wide),
                     flops_relu(spec, costs, wide),
                     flops_blur(spec, costs, conv_out),
                     flops_maxpool(spec, costs, conv_out),
                     flops_blur(spec, costs, pool_out)]
        elif variant == "cmod":
            parts = [flops_cconv(spec, costs, mod_out),
                     flops_modulus(spec, costs, mod_out),
                     flops_bias(spec, costs, mod_out),
                     flops_relu(spec, costs, mod_out)]
        else:
            raise ValueError("adaptive blur pooling is not defined for the "
                             "AlexNet-style chain")
    else:
        if variant == "std":
            parts = [flops_conv(spec, costs, conv_out),
                     flops_bn(spec, costs, conv_out),
                     flops_bias(spec, costs, conv_out),
                     flops_relu(spec, costs, conv_out),
                     flops_maxpool(spec, costs, pool_out)]
        elif variant in ("blur", "ablur"):
            tail = flops_blur if variant == "blur" else flops_ablur
            parts = [flops_conv(spec, costs, conv_out),
                     flops_bn(spec, costs, conv_out),
                     flops_bias(spec, costs, conv_out),
                     flops_relu(spec, costs, conv_out),
                     flops_maxpool(spec, costs, conv_out),
                     tail(spec, costs, pool_out)]
        else:
            parts = [flops_cconv(spec, costs, mod_out),
                     flops_modulus(spec, costs, mod_out),
                     flops_bn(spec, costs, mod_out),
                     flops_bias(spec, costs, mod_out),
                     flops_relu(spec, costs, mod_out)]
    return float(sum(parts))


def mem_items(arch, variant, spec=None):
    """Itemized saved tensors, per output channel, as (label, element count)."""
    spec = spec if spec is not None else CostSpec(arch)
    if spec.arch != arch:
        spec = CostSpec(arch, spec.K, spec.L, spec.N, spec.m_bl, spec.L_group)
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    N, m = spec.N, spec.m
    full = (N / m) ** 2
    halfres = (N / (2 * m)) ** 2
    if arch == "alexnet":
        if variant == "std":
            return [("relu->maxpool", full),
                    ("maxpool->out", halfres),
                    ("maxpool indices (x2)", 2 * halfres)]
        if variant == "blur":
            wide = (2 * N / m) ** 2
            return [("relu->blurpool", wide),
                    ("blurpool->max", full),
                    ("max->blurpool", full),
                    ("max indices (x2)", 2 * full),
                    ("blurpool->out", halfres)]
        if variant == "cmod":
            return [("cconv->modulus (complex)", 2 * halfres),
                    ("modulus->bias", halfres),
                    ("relu->out", halfres)]
        raise ValueError("adaptive blur pooling is not defined for the "
                         "AlexNet-style chain")
    if variant == "std":
        return [("conv->bn", full),
                ("bn metrics", 4.0),
                ("relu->maxpool", full),
                ("maxpool->out", halfres),
                ("maxpool indices (x2)", 2 * halfres)]
    if variant in ("blur", "ablur"):
        items = [("conv->bn", full),
                 ("bn metrics", 4.0),
                 ("relu->max", full),
                 ("max->pool", full),
                 ("max indices (x2)", 2 * full),
                 ("pool->out", halfres)]
        if variant == "ablur":
            g = spec.m_bl ** 2 / spec.L_group
            items += [("filter conv->bn", g * halfres),
                      ("filter bn metrics", 4.0 * g),
                      ("filter softmax->out", g * halfres)]
        return items
    return [("cconv->modulus (complex)", 2 * halfres),
            ("modulus->bn0", halfres),
            ("bn0 metrics", 2.0),
            ("relu->out", halfres)]


def mem_footprint(arch, variant, spec=None):
    return float(sum(count for _, count in mem_items(arch, variant, spec)))


def mem_footprint_closed(arch, variant, spec=None):
    """Closed-form totals equivalent to the itemized tables, kept separate
    so the two derivations can be cross-checked."""
    spec = spec if spec is not None else CostSpec(arch)
    base = (spec.N / spec.m) ** 2
    if arch == "alexnet":
        closed = {"std": 7.0 / 4.0 * base,
                  "blur": 33.0 / 4.0 * base,
                  "cmod": base}
    else:
        g = spec.m_bl ** 2 / spec.L_group
        closed = {"std": 11.0 / 4.0 * base + 4.0,
                  "blur": 21.0 / 4.0 * base + 4.0,
                  "ablur": 21.0 / 4.0 * base + 4.0 + g * (base / 2.0 + 4.0),
                  "cmod": base + 2.0}
    if variant not in closed:
        raise ValueError(f"no closed form for {arch}/{variant}")
    return closed[variant]


def cost_table(spec_alex=None, spec_res=None, costs=None):
    """Normalized compute and memory ratios per antialiasing method.

    Rows mirror the benchmark summary: ratios are relative to the
    non-antialiased chain of the same architecture.
    """
    rows = []
    for arch, spec in (("alexnet", spec_alex), ("resnet", spec_res)):
        spec = spec if spec is not None else CostSpec(arch)
        f_std = pipeline_flops(arch, "std", spec, costs)
        m_std = mem_footprint(arch, "std", spec)
        for variant in VARIANTS:
            if arch == "alexnet" and variant == "ablur":
                continue
            rows.append({
                "method": variant,
                "arch": arch,
                "flops_ratio": pipeline_flops(arch, variant, spec, costs) / f_std,
                "mem_ratio": mem_footprint(arch, variant, spec) / m_std,
            })
    return rows
