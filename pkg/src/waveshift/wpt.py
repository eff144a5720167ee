"""2D dual-tree wavelet packet transform (forward, inverse, kernel cascades).

Conventions
-----------
* Analysis is cross-correlation followed by downsampling at even phase:
  ``c[n] = sum_k h[k] x[2n + k]`` with periodic extension, so the cascade
  of J stages equals direct cross-correlation with an equivalent kernel
  anchored at offset zero, subsampled by 2^J. Synthesis is the exact
  adjoint, which gives perfect reconstruction for orthonormal filters.
* ``tree_combo`` is a two-letter string, first letter = tree applied along
  rows (axis 0), second letter = tree along columns (axis 1).
* Packets are returned in frequency order (lowest band first per axis).
  The natural (tree) index of frequency band f is ``f ^ (f >> 1)``.

Tree-b filter placement
-----------------------
Within each tree the filter bank may differ per node. Tree b uses its own
delayed filters only along the all-lowpass spine; on the spine that took a
highpass step first and lowpass ever after, the two trees swap filter sets;
everywhere else both trees share tree a's filters, since the quadrature
relation between them is already locked in. This placement maximizes the
one-sided-spectrum quality of the resulting complex kernels; it is the
unique optimum over all per-node assignments of the two filter sets.
"""

from __future__ import annotations

import numpy as np

from .filters import FilterPair

__all__ = [
    "wpt_forward", "wpt_inverse", "tree_filters",
    "natural_of_frequency", "frequency_of_natural", "equivalent_kernels_1d",
]

TREE_COMBOS = ("aa", "ab", "ba", "bb")


def natural_of_frequency(J):
    """Natural (tree-order) leaf index for each frequency-ordered band."""
    f = np.arange(2 ** J)
    return f ^ (f >> 1)


def frequency_of_natural(J):
    nat = natural_of_frequency(J)
    inv = np.empty_like(nat)
    inv[nat] = np.arange(nat.size)
    return inv


def _node_roles(stage, parent_nat):
    """(role of tree a, role of tree b) at a node; roles index the two banks."""
    if stage == 1 or parent_nat == 0:
        return "a", "b"
    if parent_nat == (1 << (stage - 2)):
        return "b", "a"
    return "a", "a"


def tree_filters(pair: FilterPair, tree, stage, parent_nat):
    """Analysis (lo, hi) used by ``tree`` at ``stage`` under node ``parent_nat``."""
    role_a, role_b = _node_roles(stage, parent_nat)
    role = role_a if tree == "a" else role_b
    return pair.analysis_set(role, stage_one=(stage == 1))


def _corr_down(x, h, axis, decimate):
    """Periodic cross-correlation with h, then optional downsample by 2."""
    y = np.zeros_like(x)
    for k, hk in enumerate(h):
        if hk != 0.0:
            y += hk * np.roll(x, -k, axis=axis)
    if not decimate:
        return y
    sl = [slice(None)] * x.ndim
    sl[axis] = slice(0, None, 2)
    return y[tuple(sl)]


def _up_conv_pair(c_lo, c_hi, lo, hi, axis):
    """Adjoint of the decimated analysis pair along ``axis``."""
    shape = list(c_lo.shape)
    shape[axis] = 2 * shape[axis]
    sl = [slice(None)] * c_lo.ndim
    sl[axis] = slice(0, None, 2)
    u_lo = np.zeros(shape, dtype=c_lo.dtype)
    u_hi = np.zeros(shape, dtype=c_hi.dtype)
    u_lo[tuple(sl)] = c_lo
    u_hi[tuple(sl)] = c_hi
    out = np.zeros(shape, dtype=np.result_type(c_lo, c_hi))
    for k in range(lo.size):
        if lo[k] != 0.0:
            out += lo[k] * np.roll(u_lo, k, axis=axis)
        if hi[k] != 0.0:
            out += hi[k] * np.roll(u_hi, k, axis=axis)
    return out


def _check_combo(tree_combo):
    if tree_combo not in TREE_COMBOS:
        raise ValueError(f"tree_combo must be one of {TREE_COMBOS}, got {tree_combo!r}")


def wpt_forward(x, pair, tree_combo="aa", J=2, last_stage_undecimated=False):
    """Full wavelet packet tree of depth J for one row/column tree assignment.

    Parameters
    ----------
    x : (h, w) ndarray
        Input map. Both dimensions must be divisible by 2^J (or 2^(J-1)
        when the last stage is undecimated).
    pair : FilterPair
    tree_combo : str
        Row/column tree letters, e.g. "ab".
    J : int
        Decomposition depth, >= 1.
    last_stage_undecimated : bool
        Skip the subsampling of stage J, leaving packets at resolution
        input / 2^(J-1).

    Returns
    -------
    (4^J, h', w') ndarray
        Packets in frequency order, flat index = p * 2^J + q with p the
        row band and q the column band.
    """
    _check_combo(tree_combo)
    if J < 1:
        raise ValueError("J must be >= 1")
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("input must be 2D")
    div = 2 ** (J - 1) if last_stage_undecimated else 2 ** J
    if x.shape[0] % div or x.shape[1] % div:
        raise ValueError(
            f"input shape {x.shape} not divisible by {div} (J={J}, "
            f"last_stage_undecimated={last_stage_undecimated})"
        )
    row_tree, col_tree = tree_combo
    packets = {(0, 0): x}
    for stage in range(1, J + 1):
        decimate = not (last_stage_undecimated and stage == J)
        new = {}
        for (p, q), data in packets.items():
            lo_r, hi_r = tree_filters(pair, row_tree, stage, p)
            lo_c, hi_c = tree_filters(pair, col_tree, stage, q)
            row_lo = _corr_down(data, lo_r, 0, decimate)
            row_hi = _corr_down(data, hi_r, 0, decimate)
            new[(2 * p, 2 * q)] = _corr_down(row_lo, lo_c, 1, decimate)
            new[(2 * p, 2 * q + 1)] = _corr_down(row_lo, hi_c, 1, decimate)
            new[(2 * p + 1, 2 * q)] = _corr_down(row_hi, lo_c, 1, decimate)
            new[(2 * p + 1, 2 * q + 1)] = _corr_down(row_hi, hi_c, 1, decimate)
        packets = new
    n1 = 2 ** J
    nat = natural_of_frequency(J)
    out = np.stack([packets[(nat[p], nat[q])]
                    for p in range(n1) for q in range(n1)])
    return out


def wpt_inverse(packets, pair, tree_combo="aa", J=2, last_stage_undecimated=False):
    """Reconstruct the input of :func:`wpt_forward` (adjoint synthesis).

    Undecimated last-stage packets are first reduced to their even-phase
    samples, which carry the decimated coefficients exactly.
    """
    _check_combo(tree_combo)
    packets = np.asarray(packets, dtype=float)
    n1 = 2 ** J
    if packets.shape[0] != n1 * n1:
        raise ValueError(f"expected {n1 * n1} packets for J={J}, got {packets.shape[0]}")
    h = packets.shape[1]
    if last_stage_undecimated:
        if h % 2:
            raise ValueError("undecimated packets must have even dimensions")
        packets = packets[:, ::2, ::2]
    nat = natural_of_frequency(J)
    row_tree, col_tree = tree_combo
    current = {(nat[p], nat[q]): packets[p * n1 + q]
               for p in range(n1) for q in range(n1)}
    for stage in range(J, 0, -1):
        new = {}
        half = 2 ** (stage - 1)
        for p in range(half):
            for q in range(half):
                lo_r, hi_r = tree_filters(pair, row_tree, stage, p)
                lo_c, hi_c = tree_filters(pair, col_tree, stage, q)
                ll = current[(2 * p, 2 * q)]
                lh = current[(2 * p, 2 * q + 1)]
                hl = current[(2 * p + 1, 2 * q)]
                hh = current[(2 * p + 1, 2 * q + 1)]
                row_lo = _up_conv_pair(ll, lh, lo_c, hi_c, 1)
                row_hi = _up_conv_pair(hl, hh, lo_c, hi_c, 1)
                new[(p, q)] = _up_conv_pair(row_lo, row_hi, lo_r, hi_r, 0)
        current = new
    return current[(0, 0)]


def equivalent_kernels_1d(pair, tree, J):
    """Equivalent cross-correlation kernels of the depth-J packet cascade.

    Returns a list indexed by natural band; kernel supports are anchored at
    offset zero, so ``(x (star) g)[2^J n] == cascade output[n]`` exactly
    under periodic extension.
    """
    kernels = [np.array([1.0])]
    rate = 1
    for stage in range(1, J + 1):
        new = []
        for nat, g in enumerate(kernels):
            lo, hi = tree_filters(pair, tree, stage, nat)
            for h in (lo, hi):
                holed = np.zeros(rate * (h.size - 1) + 1)
                holed[::rate] = h
                new.append(np.convolve(g, holed))
        kernels = new
        rate *= 2
    return kernels
