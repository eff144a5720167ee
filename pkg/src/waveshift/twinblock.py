"""Wavelet-block assembly: luminance mixing, packet features, grouped mixing.

The real block maps an RGB image to L_high channels through
luminance -> packet features at stride 2^(J-1) -> row selection ->
per-group 1x1 mixing. The complex variant runs the same pipeline on
complex packets at stride 2^J and takes a pointwise modulus after mixing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .ops import cross_correlate, subsample
from .packetbank import PacketBank
from .wpt import wpt_forward

__all__ = [
    "MixGroup", "TwinConfig", "load_config", "builtin_configs",
    "luminance", "dt_features", "complex_packet_features", "select_permute",
    "group_mix", "sparsity_penalty", "sparsity_penalty_grad",
    "one_hot_mixing", "wblock_forward", "cwblock_forward", "bn0",
    "verify_prop1", "verify_prop2", "prop1_eligible", "prop2_eligible",
    "synthetic_bandlimited_kernel",
]


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixGroup:
    packets: tuple          # flat half-plane kernel indices
    out: int                # output channels assigned to this group
    lam: float = 0.0        # sparse-regularization weight


@dataclass(frozen=True)
class TwinConfig:
    """Per-architecture settings of one twin first layer."""

    arch: str
    m: int
    J: int
    L_low: int
    L_high: int
    groups: tuple
    mu: tuple = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)

    def __post_init__(self):
        if self.m != 2 ** (self.J - 1):
            raise ValueError(f"stride {self.m} must equal 2^(J-1) with J={self.J}")
        total = sum(g.out for g in self.groups)
        if total != self.L_high:
            raise ValueError(f"group outputs sum to {total}, expected {self.L_high}")
        mu = np.asarray(self.mu, dtype=float)
        if mu.shape != (3,) or np.any(mu < 0) or abs(mu.sum() - 1.0) > 1e-9:
            raise ValueError("mu must be a 3-vector on the probability simplex")
        n_half = 2 * 4 ** self.J
        lowpass = {0, 4 ** self.J}
        seen = set()
        for g in self.groups:
            for i in g.packets:
                if not 0 <= i < n_half:
                    raise ValueError(f"packet index {i} outside half-plane range")
                if i in lowpass:
                    raise ValueError(f"packet index {i} is a low-pass channel")
                if i in seen:
                    raise ValueError(f"packet index {i} used twice")
                seen.add(i)
            if g.out < 1 or g.lam < 0:
                raise ValueError("each group needs out >= 1 and lambda >= 0")

    @property
    def selected_packets(self):
        return tuple(i for g in self.groups for i in g.packets)

    @property
    def group_lambdas(self):
        return tuple(g.lam for g in self.groups)

    @classmethod
    def from_dict(cls, d):
        groups = tuple(
            MixGroup(tuple(g["packets"]), int(g["out"]), float(g.get("lambda", 0.0)))
            for g in d["groups"]
        )
        return cls(arch=d["arch"], m=int(d["m"]), J=int(d["J"]),
                   L_low=int(d["L_low"]), L_high=int(d["L_high"]),
                   groups=groups, mu=tuple(d.get("mu", (1/3, 1/3, 1/3))))

    def to_dict(self):
        return {
            "arch": self.arch, "m": self.m, "J": self.J,
            "L_low": self.L_low, "L_high": self.L_high,
            "mu": list(self.mu),
            "groups": [{"packets": list(g.packets), "out": g.out, "lambda": g.lam}
                       for g in self.groups],
        }


def builtin_configs():
    return ("walexnet", "wresnet")


def load_config(name_or_path):
    """Load a built-in config by name or any config from a JSON path."""
    if name_or_path in builtin_configs():
        import importlib.resources
        text = importlib.resources.files("waveshift.configs") \
            .joinpath(f"{name_or_path}.json").read_text()
    else:
        with open(name_or_path) as fh:
            text = fh.read()
    return TwinConfig.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# block stages
# ---------------------------------------------------------------------------

def luminance(X, mu):
    """Weighted channel mix sum_k mu_k x_k with mu on the simplex."""
    X = np.asarray(X)
    mu = np.asarray(mu, dtype=float)
    if X.ndim != 3 or X.shape[0] != mu.size:
        raise ValueError("X must be (K, h, w) with one weight per channel")
    if np.any(mu < 0) or abs(mu.sum() - 1.0) > 1e-9:
        raise ValueError("mu must be nonnegative and sum to 1")
    return np.tensordot(mu, X, axes=1)


def _padded_trees(x, bank, J, boundary, last_stage_undecimated):
    """Run all four tree combos, handling boundary by symmetric padding."""
    stride = 2 ** (J - 1) if last_stage_undecimated else 2 ** J
    h, w = x.shape
    if boundary == "periodic":
        xp, off = x, 0
        if h % stride or w % stride:
            raise ValueError(f"input shape {x.shape} not divisible by stride {stride}")
    elif boundary == "symmetric":
        klen = 9 * (2 ** J - 1) + 1
        if min(h, w) < klen:
            raise ValueError(
                f"symmetric boundary needs inputs of at least {klen} per axis")
        if h % stride or w % stride:
            raise ValueError(f"input shape {x.shape} not divisible by stride {stride}")
        pad = -(-klen // stride) * stride
        xp = np.pad(x, pad, mode="symmetric")
        off = pad // stride
    else:
        raise ValueError(f"unknown boundary {boundary!r}")
    out = {}
    for combo in ("aa", "ab", "ba", "bb"):
        packs = wpt_forward(xp, bank.pair, combo, J, last_stage_undecimated)
        if off:
            packs = packs[:, off:off + h // stride, off:off + w // stride]
        out[combo] = packs
    return out


def dt_features(x_lum, bank: PacketBank, boundary="symmetric"):
    """Real parts of the half-plane packet responses at stride 2^(J-1).

    Computed with the fast separable tree (last stage undecimated); equals
    direct cross-correlation with the real parts of the bank kernels.
    Returns (2 * 4^J, h / 2^(J-1), w / 2^(J-1)).
    """
    J = bank.depth
    trees = _padded_trees(np.asarray(x_lum, dtype=float), bank, J,
                          boundary, last_stage_undecimated=True)
    return _assemble(trees, bank, complex_output=False)


def complex_packet_features(x_lum, bank: PacketBank, boundary="symmetric"):
    """Half-plane complex packet responses at stride 2^J."""
    J = bank.depth
    trees = _padded_trees(np.asarray(x_lum, dtype=float), bank, J,
                          boundary, last_stage_undecimated=False)
    return _assemble(trees, bank, complex_output=True)


def _assemble(trees, bank, complex_output):
    J = bank.depth
    n1 = 2 ** J
    sig = bank.band_signs
    rt2 = math.sqrt(2.0)
    chans = []
    for v in (0, 1):
        for p in range(n1):
            for q in range(n1):
                i = p * n1 + q
                ss = sig[p] * sig[q]
                re = (trees["aa"][i] - ss * trees["bb"][i]) / rt2 if v == 0 \
                    else (trees["aa"][i] + ss * trees["bb"][i]) / rt2
                if not complex_output:
                    chans.append(re)
                    continue
                im = (sig[q] * trees["ab"][i] + sig[p] * trees["ba"][i]) / rt2 if v == 0 \
                    else (sig[q] * trees["ab"][i] - sig[p] * trees["ba"][i]) / rt2
                chans.append(re + 1j * im)
    return np.stack(chans)


def select_permute(D, rows, bank: PacketBank = None):
    """Reorder and restrict channels: D' = D[rows].

    Row indices must be distinct and in range; when a bank is given, its
    two low-pass channel indices are rejected.
    """
    D = np.asarray(D)
    rows = list(rows)
    if len(set(rows)) != len(rows):
        raise ValueError("duplicate row index in permutation")
    for r in rows:
        if not 0 <= r < D.shape[0]:
            raise ValueError(f"row index {r} out of range for {D.shape[0]} channels")
        if bank is not None and r in bank.lowpass_indices:
            raise ValueError(
                f"row {r} is a low-pass channel {bank.lowpass_indices}; "
                "low-pass packets are excluded from mixing")
    return D[rows]


def group_mix(D_groups, matrices):
    """Per-group linear mixing: out_l = a_l . D^(q), concatenated over groups."""
    outs = []
    for D, A in zip(D_groups, matrices):
        A = np.asarray(A, dtype=float)
        D = np.asarray(D)
        if A.ndim != 2 or A.shape[1] != D.shape[0]:
            raise ValueError(
                f"mixing matrix {A.shape} does not match group of {D.shape[0]} channels")
        outs.append(np.tensordot(A, D, axes=1))
    return np.concatenate(outs, axis=0)


def sparsity_penalty(matrices, lams):
    """Mixed-norm row penalty sum_q lam_q sum_l (||a_l||_1 / ||a_l||_inf - 1)."""
    if len(matrices) != len(lams):
        raise ValueError("one weight per matrix required")
    total = 0.0
    for A, lam in zip(matrices, lams):
        if lam < 0:
            raise ValueError("weights must be nonnegative")
        A = np.asarray(A, dtype=float)
        for row in np.atleast_2d(A):
            m = np.abs(row).max()
            if m == 0.0:
                raise ValueError("all-zero mixing row: penalty undefined")
            total += lam * (np.abs(row).sum() / m - 1.0)
    return float(total)


def sparsity_penalty_grad(matrices, lams):
    """Analytic subgradient of :func:`sparsity_penalty` away from ties."""
    grads = []
    for A, lam in zip(matrices, lams):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        G = np.zeros_like(A)
        for li, row in enumerate(A):
            absr = np.abs(row)
            m = absr.max()
            if m == 0.0:
                raise ValueError("all-zero mixing row: gradient undefined")
            j = int(absr.argmax())
            G[li] = np.sign(row) / m
            G[li, j] = np.sign(row[j]) * (m - absr.sum()) / m ** 2
            G[li] *= lam
        grads.append(G)
    return grads


def one_hot_mixing(config: TwinConfig, rng, scale=1.0):
    """One nonzero per row, column drawn uniformly within the group."""
    mats = []
    for g in config.groups:
        A = np.zeros((g.out, len(g.packets)))
        cols = rng.integers(0, len(g.packets), size=g.out)
        A[np.arange(g.out), cols] = scale
        mats.append(A)
    return mats


def _grouped(D_sel, config):
    out, start = [], 0
    for g in config.groups:
        out.append(D_sel[start:start + len(g.packets)])
        start += len(g.packets)
    return out


def wblock_forward(X, config: TwinConfig, matrices, bank: PacketBank,
                   boundary="symmetric"):
    """Real wavelet block: (3, h, w) -> (L_high, h / 2^(J-1), w / 2^(J-1))."""
    x_lum = luminance(X, config.mu)
    D = dt_features(x_lum, bank, boundary=boundary)
    D_sel = select_permute(D, config.selected_packets, bank)
    return group_mix(_grouped(D_sel, config), matrices)


def cwblock_forward(X, config: TwinConfig, matrices, bank: PacketBank,
                    boundary="symmetric"):
    """Complex wavelet block with modulus: output at stride 2^J."""
    x_lum = luminance(X, config.mu)
    Z = complex_packet_features(x_lum, bank, boundary=boundary)
    Z_sel = select_permute(Z, config.selected_packets, bank)
    return np.abs(group_mix(_grouped(Z_sel, config), matrices))


def bn0(u, b, eps):
    """Normalization without mean centering: relu(u / sqrt(mean(u^2)/2 + eps) + b)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("bn0 expects a nonnegative (modulus) map")
    return np.maximum(0.0, u / np.sqrt(0.5 * (u ** 2).mean() + eps) + b)


# ---------------------------------------------------------------------------
# proposition checks
# ---------------------------------------------------------------------------

def _band_avoids_alias_lines(f):
    """True when band [f, f+1] (units of pi / 2^J) avoids nonzero multiples
    of the stride-m alias spacing, which is four band widths."""
    return f == 0 or (f % 4 != 0 and (f + 1) % 4 != 0)


def prop1_eligible(bank, index):
    """Whether the zero-mean identity's hypotheses hold for a kernel.

    Requires a band-pass window (not the DC cell) whose edges avoid the
    nonzero points of the stride-m alias lattice on both axes. The DC-edge
    band (f = 0) stays eligible off the DC cell because the band-pass axis
    zeroes the kernel's response at the origin exactly.
    """
    _, p, q, _ = bank.band_of(index)
    if p == 0 and q == 0:
        return False
    return _band_avoids_alias_lines(p) and _band_avoids_alias_lines(q)


def prop2_eligible(bank, index):
    """Whether the energy-ratio identity's hypotheses hold for a kernel.

    Needs both axis windows strictly inside the spectrum (away from the DC
    and Nyquist edges) and clear of alias lines; with 10-tap filters the
    effective window of a depth-3 bank already exceeds the pi/m budget, so
    only depth <= 2 kernels qualify.
    """
    if bank.depth > 2:
        return False
    _, p, q, _ = bank.band_of(index)
    n1 = bank.bands_per_axis
    interior = [f for f in range(1, n1 - 1) if _band_avoids_alias_lines(f)]
    return p in interior and q in interior


def _periodic_corr(x, w):
    """(x (star) w)[n] = sum_t x[n+t] w[t] on x's periodic grid."""
    if w.shape[0] > x.shape[0] or w.shape[1] > x.shape[1]:
        raise ValueError("kernel larger than the map")
    wp = np.zeros(x.shape, dtype=complex)
    wp[: w.shape[0], : w.shape[1]] = w
    return np.fft.ifft2(np.fft.fft2(x) * np.conj(np.fft.fft2(np.conj(wp))))


def verify_prop1(w, x, m, boundary="valid"):
    """Relative magnitude of the strided response mean: |sum Y| / ||Y||_1.

    Y = (x (star) Re w) downsampled by m. Near zero when the kernel is
    band-pass and its spectral window avoids the subsampling alias lattice;
    order one for low-pass kernels.
    """
    if boundary == "valid":
        Y = subsample(cross_correlate(x, np.real(w), mode="valid"), m)
    elif boundary == "periodic":
        Y = subsample(_periodic_corr(x, w).real, m)
    else:
        raise ValueError(f"unknown boundary {boundary!r}")
    denom = np.abs(Y).sum()
    if denom == 0.0:
        return 0.0
    return float(abs(Y.sum()) / denom)


def verify_prop2(w, x, m, boundary="valid"):
    """Energy ratio ||Y||^2 / (2 ||U||^2) of real versus modulus responses.

    Y is the stride-m response to Re w; U the stride-2m modulus response to
    the complex kernel. Close to one for analytic band-pass kernels whose
    window avoids alias overlap. A zero input returns 1.0 by convention.
    """
    if boundary == "valid":
        Z = cross_correlate(x, w, mode="valid")
    elif boundary == "periodic":
        Z = _periodic_corr(x, w)
    else:
        raise ValueError(f"unknown boundary {boundary!r}")
    Y = subsample(Z.real, m)
    U = np.abs(subsample(Z, 2 * m))
    denom = 2.0 * (U ** 2).sum()
    if denom == 0.0:
        return 1.0
    return float((Y ** 2).sum() / denom)


def synthetic_bandlimited_kernel(n, m, rng, width_factor=0.5):
    """Complex kernel with exactly box-limited spectrum on a periodic n-grid.

    The spectral box has side width_factor * pi / m and is centered between
    the points of the stride-m alias lattice, away from the origin, so both
    response identities hold to machine precision under periodic
    correlation for any input.
    """
    if n % (4 * m):
        raise ValueError("n must be a multiple of 4m for lattice-safe placement")
    freqs = np.fft.fftfreq(n) * 2.0 * np.pi
    KX = freqs[None, :]
    KY = freqs[:, None]
    width = width_factor * np.pi / m
    center = 1.5 * np.pi / m
    box = (np.abs(KX - center) < width / 2) & (np.abs(KY - center) < width / 2)
    spec = np.zeros((n, n), dtype=complex)
    vals = rng.standard_normal(box.sum()) + 1j * rng.standard_normal(box.sum())
    spec[box] = vals
    kernel = np.fft.ifft2(spec)
    return kernel / np.linalg.norm(kernel)
