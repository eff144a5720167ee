"""Shift-robustness measurement: shifted patches, KL divergence, flip rates.

Half-pixel shifts are realized on a 2x bilinearly upsampled copy of the
image (midpoint insertion), shifted by an integer number of upsampled
samples and decimated back; integer shifts slice the original directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ShiftProbe", "ConsistencyReport", "extract_shifted_patches",
    "kl_divergence", "mean_flip_rate", "feature_consistency",
]

_AXES = ("horizontal", "vertical", "diagonal")


@dataclass(frozen=True)
class ShiftProbe:
    """Patch-extraction plan: axis, half-pixel-quantized shifts, patch size."""

    axis: str
    shifts: tuple
    patch_size: int
    anchor: tuple = (0, 0)

    def __post_init__(self):
        if self.axis not in _AXES:
            raise ValueError(f"axis must be one of {_AXES}")
        for s in self.shifts:
            if abs(round(2 * s) - 2 * s) > 1e-9:
                raise ValueError(f"shift {s} is not quantized to half pixels")

    def displacement(self, s):
        dx = s if self.axis in ("horizontal", "diagonal") else 0.0
        dy = s if self.axis in ("vertical", "diagonal") else 0.0
        return dy, dx


@dataclass
class ConsistencyReport:
    """Per-shift feature distances for one operator along one axis."""

    operator: str
    axis: str
    shifts: tuple
    distances: tuple
    baseline_id: str = "none"
    mfr_per_axis: dict = field(default_factory=dict)


def _upsample2(img):
    """Bilinear 2x upsampling by exact midpoint insertion, size 2n-1."""
    up = np.zeros((2 * img.shape[0] - 1, 2 * img.shape[1] - 1), dtype=float)
    up[::2, ::2] = img
    up[1::2, ::2] = 0.5 * (img[:-1, :] + img[1:, :])
    up[::2, 1::2] = 0.5 * (img[:, :-1] + img[:, 1:])
    up[1::2, 1::2] = 0.25 * (img[:-1, :-1] + img[1:, :-1]
                             + img[:-1, 1:] + img[1:, 1:])
    return up


def extract_shifted_patches(img, probe: ShiftProbe):
    """Extract one patch per shift; all patches must fit inside the image."""
    img = np.asarray(img, dtype=float)
    P = probe.patch_size
    y0, x0 = probe.anchor
    patches = []
    up = None
    for s in probe.shifts:
        dy, dx = probe.displacement(s)
        if float(dy).is_integer() and float(dx).is_integer():
            yy, xx = y0 + int(dy), x0 + int(dx)
            if yy < 0 or xx < 0 or yy + P > img.shape[0] or xx + P > img.shape[1]:
                raise ValueError(f"shift {s} pushes the patch outside the image")
            patches.append(img[yy:yy + P, xx:xx + P].copy())
        else:
            if up is None:
                up = _upsample2(img)
            ty, tx = 2 * y0 + int(round(2 * dy)), 2 * x0 + int(round(2 * dx))
            if ty < 0 or tx < 0 or ty + 2 * (P - 1) >= up.shape[0] \
                    or tx + 2 * (P - 1) >= up.shape[1]:
                raise ValueError(f"shift {s} pushes the patch outside the image")
            patches.append(up[ty:ty + 2 * P - 1:2, tx:tx + 2 * P - 1:2].copy())
    return np.stack(patches)


def kl_divergence(p, q, eps=1e-12):
    """Kullback-Leibler divergence sum p_i log(p_i / q_i), q floored at eps."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("p and q must have the same shape")
    for name, vec in (("p", p), ("q", q)):
        if np.any(vec < 0) or abs(vec.sum() - 1.0) > 1e-9:
            raise ValueError(f"{name} is not a probability vector")
    q = np.maximum(q, eps)
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def mean_flip_rate(label_seqs, baseline=1.0):
    """Mean frequency of consecutive top-1 flips under growing shifts.

    ``label_seqs`` maps axis name -> integer array of shape (S + 1, n); row
    zero holds unshifted predictions and row s the predictions at the s-th
    shift distance. The flip rate averages label changes between rows s-1
    and s over shifts, images and axes, then divides by ``baseline``.
    """
    if not label_seqs:
        raise ValueError("no label sequences given")
    if baseline <= 0:
        raise ValueError("baseline must be positive")
    rates = []
    for axis, labels in label_seqs.items():
        labels = np.asarray(labels)
        if labels.ndim != 2 or labels.shape[0] < 2 or labels.size == 0:
            raise ValueError(f"axis {axis!r}: need at least one shift row")
        rates.append(np.mean(labels[1:] != labels[:-1]))
    return float(np.mean(rates) / baseline)


def feature_consistency(op, shifts, stride, axis="horizontal",
                        operator_name="op", interior=2):
    """Normalized interior L2 distance between aligned operator outputs.

    ``op`` maps a (fractional) shift to the operator output for that input
    shift; ``stride`` is the operator's output stride in input pixels.
    When a shift equals a whole number of output samples the outputs are
    realigned along the shifted axes before comparison, so exactly
    covariant operators score zero there.
    """
    move_x = axis in ("horizontal", "diagonal")
    move_y = axis in ("vertical", "diagonal")
    distances = []
    for s in shifts:
        ref = np.asarray(op(0.0))
        out = np.asarray(op(float(s)))
        ratio = s / stride
        k = int(round(ratio))
        if abs(ratio - k) > 1e-9:
            k = 0
        if k:
            if move_x:
                out = out[..., :, k:]
                ref = ref[..., :, :ref.shape[-1] - k]
            if move_y:
                out = out[..., k:, :]
                ref = ref[..., :ref.shape[-2] - k, :]
        if interior:
            sl = (slice(interior, -interior),) * 2
            out = out[(Ellipsis,) + sl]
            ref = ref[(Ellipsis,) + sl]
        denom = np.linalg.norm(ref)
        dist = 0.0 if denom == 0 else float(np.linalg.norm(out - ref) / denom)
        distances.append(dist)
    return ConsistencyReport(operator=operator_name, axis=axis,
                             shifts=tuple(shifts), distances=tuple(distances))
