"""Orthogonal filter sets driving the dual-tree packet transform.

A :class:`FilterPair` bundles two 1D orthonormal lowpass/highpass sets:

* a first-stage pair, where the second tree runs the same filters delayed
  by one sample, and
* a 10-tap Q-shift pair for every later stage, where the second tree runs
  the time-reversed filters (a relative half-sample delay).

Highpass filters are derived from the lowpass by alternating flip, and
synthesis filters are the time-reversed analysis filters, so a single
lowpass array per set fully determines the pair.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import numpy as np

__all__ = ["FilterPair", "load_filter_pair", "available_filter_pairs"]

_FIRST_STAGE_SETS = {"farras10": "farras10.txt"}
_QSHIFT_SETS = {"qshift10": "qshift10.txt"}


def _read_coeff_file(filename):
    """Parse a coefficient file: '# name length' header, one value per line."""
    text = importlib.resources.files("waveshift.data").joinpath(filename).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{filename}: missing '# name length' header")
    _, name, length = lines[0].split()
    coeffs = np.array([float(v) for v in lines[1:]])
    if coeffs.size != int(length):
        raise ValueError(
            f"{filename}: header announces {length} coefficients, found {coeffs.size}"
        )
    return name, coeffs


def alternating_flip(lo):
    """Highpass complement of an orthonormal lowpass: h1[n] = (-1)^n h0[L-1-n]."""
    hi = lo[::-1].copy()
    hi[1::2] *= -1.0
    return hi


def delay_one(h):
    """Same filter with its support delayed by one sample on a fixed grid."""
    out = np.roll(h, 1)
    out[0] = 0.0
    return out


@dataclass(frozen=True)
class FilterPair:
    """One dual-tree filter set: first-stage pair plus Q-shift pair.

    Attributes
    ----------
    name : str
        Identifier accepted by :func:`load_filter_pair`.
    first_stage_lo, first_stage_hi : ndarray
        Analysis filters of the first decomposition stage (tree a).
    qshift_lo, qshift_hi : ndarray
        Analysis filters of every later stage (tree a).
    delay_offset : float
        Relative delay of tree b's filters beyond stage one, in samples.
        The first stage always uses a one-sample delay.
    """

    name: str
    first_stage_lo: np.ndarray = field(repr=False)
    first_stage_hi: np.ndarray = field(repr=False)
    qshift_lo: np.ndarray = field(repr=False)
    qshift_hi: np.ndarray = field(repr=False)
    delay_offset: float = 0.5

    # Tree-b analysis filters.
    @property
    def first_stage_lo_b(self):
        return delay_one(self.first_stage_lo)

    @property
    def first_stage_hi_b(self):
        return alternating_flip(self.first_stage_lo_b)

    @property
    def qshift_lo_b(self):
        return self.qshift_lo[::-1].copy()

    @property
    def qshift_hi_b(self):
        return alternating_flip(self.qshift_lo_b)

    # Synthesis filters (time-reversed analysis; the orthonormal adjoint).
    @property
    def first_stage_lo_synth(self):
        return self.first_stage_lo[::-1].copy()

    @property
    def first_stage_hi_synth(self):
        return self.first_stage_hi[::-1].copy()

    @property
    def qshift_lo_synth(self):
        return self.qshift_lo[::-1].copy()

    @property
    def qshift_hi_synth(self):
        return self.qshift_hi[::-1].copy()

    def analysis_set(self, tree, stage_one):
        """Lowpass/highpass analysis filters for ``tree`` in {'a', 'b'}."""
        if tree == "a":
            return ((self.first_stage_lo, self.first_stage_hi) if stage_one
                    else (self.qshift_lo, self.qshift_hi))
        if tree == "b":
            return ((self.first_stage_lo_b, self.first_stage_hi_b) if stage_one
                    else (self.qshift_lo_b, self.qshift_hi_b))
        raise ValueError(f"tree must be 'a' or 'b', got {tree!r}")

    def validate(self, tol=1e-12):
        """Check orthonormality and DC/Nyquist gains of both filter sets."""
        for label, lo in (("first_stage", self.first_stage_lo),
                          ("qshift", self.qshift_lo)):
            if abs((lo ** 2).sum() - 1.0) > tol:
                raise ValueError(f"{label} lowpass is not unit norm")
            for lag in range(2, lo.size, 2):
                if abs(np.dot(lo[:-lag], lo[lag:])) > tol:
                    raise ValueError(f"{label} autocorrelation at lag {lag} nonzero")
            if abs(lo.sum() - np.sqrt(2.0)) > tol:
                raise ValueError(f"{label} DC gain differs from sqrt(2)")
        return True


def available_filter_pairs():
    return sorted(f"{q}+{f}" for q in _QSHIFT_SETS for f in _FIRST_STAGE_SETS) + \
        sorted(_QSHIFT_SETS)


def load_filter_pair(name="qshift10"):
    """Load a named filter set.

    ``name`` is either a Q-shift identifier ("qshift10", implying the
    default first stage) or an explicit "qshift10+farras10" combination.
    Coefficients come from the checked-in data files and are validated on
    load rather than trusted.
    """
    if "+" in name:
        qname, fname = name.split("+", 1)
    else:
        qname, fname = name, "farras10"
    if qname not in _QSHIFT_SETS or fname not in _FIRST_STAGE_SETS:
        raise ValueError(
            f"unknown filter set {name!r}; available: {', '.join(available_filter_pairs())}"
        )
    _, qlo = _read_coeff_file(_QSHIFT_SETS[qname])
    _, flo = _read_coeff_file(_FIRST_STAGE_SETS[fname])
    pair = FilterPair(
        name=f"{qname}+{fname}",
        first_stage_lo=flo,
        first_stage_hi=alternating_flip(flo),
        qshift_lo=qlo,
        qshift_hi=alternating_flip(qlo),
    )
    pair.validate()
    return pair
