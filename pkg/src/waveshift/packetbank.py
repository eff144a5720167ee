"""Materialized complex packet kernels and their spectral bookkeeping.

A depth-J bank holds 4 * 4^J complex 2D kernels. The first half lives in
the positive-xi1 half-plane; the second half consists of their complex
conjugates, whose spectra are the point mirrors. Within the half-plane,
flat index = v * 4^J + p * 2^J + q, where q is the column (xi1) band, p
the row band, and v selects the sign of the xi2 window (v = 0 covers
xi2 >= 0). Bands are frequency ordered.

Each kernel is built from the four tree combos of the equivalent packet
cascade kernels: with per-axis analytic atoms A = g_a + i s g_b (sign s
chosen per band to maximize one-sided energy), the v = 0 kernel is the
outer product A_p (x) A_q and v = 1 uses conjugated row atoms, scaled by
1/sqrt(2) so the real part matches the orthonormal real packet atom
(aa -+ bb)/sqrt(2).

Two column classes cannot be one-sided no matter how the two trees are
arranged: the band hugging DC (q = 0) and the band hugging the Nyquist
frequency (q = 2^J - 1). Their positive-xi1 energy tops out near 0.83 to
0.86 (an ideal-filter argument caps the DC band at 1/2 + 1/pi). The bank
records measured fractions per kernel so downstream code can see this.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .filters import FilterPair
from .spectral import positive_x_fraction, spectral_center
from .wpt import equivalent_kernels_1d, natural_of_frequency

__all__ = ["PacketBank", "build_packet_bank", "analytic_atoms_1d"]


def analytic_atoms_1d(pair, J, nfft=1024):
    """Frequency-ordered complex 1D atoms g_a + i s g_b and their metadata.

    Returns (atoms, signs, fractions): per band, the analytic combination
    with the sign that maximizes energy on nonnegative frequencies.
    """
    ga = equivalent_kernels_1d(pair, "a", J)
    gb = equivalent_kernels_1d(pair, "b", J)
    nat = natural_of_frequency(J)
    atoms, signs, fractions = [], [], []
    for f in range(2 ** J):
        best, best_sign, best_atom = -1.0, 1.0, None
        for sign in (1.0, -1.0):
            atom = ga[nat[f]] + 1j * sign * gb[nat[f]]
            power = np.abs(np.fft.fft(atom, nfft)) ** 2
            pos = power[0] + 0.5 * power[nfft // 2] + power[1:nfft // 2].sum()
            frac = pos / power.sum()
            if frac > best:
                best, best_sign, best_atom = frac, sign, atom
        atoms.append(best_atom)
        signs.append(best_sign)
        fractions.append(best)
    return atoms, np.array(signs), np.array(fractions)


@dataclass
class PacketBank:
    """All 4 * 4^J complex packet kernels of one filter set at depth J."""

    depth: int
    pair: FilterPair
    kernels: np.ndarray = field(repr=False)      # (4*4^J, L, L) complex
    cell_centers: np.ndarray = field(repr=False)  # (4*4^J, 2), (xi1, xi2)
    halfplane_mask: np.ndarray = field(repr=False)
    posx_fractions: np.ndarray = field(repr=False)
    band_signs: np.ndarray = field(repr=False)    # per 1D frequency band

    @property
    def n_kernels(self):
        return self.kernels.shape[0]

    @property
    def n_halfplane(self):
        return 2 * 4 ** self.depth

    @property
    def bands_per_axis(self):
        return 2 ** self.depth

    @property
    def lowpass_indices(self):
        """Half-plane indices of the two DC-window kernels."""
        return (0, 4 ** self.depth)

    def flat_index(self, v, p, q):
        n1 = self.bands_per_axis
        return v * n1 * n1 + p * n1 + q

    def band_of(self, index):
        """(v, p, q, mirrored) for any flat kernel index."""
        nh = self.n_halfplane
        mirrored = index >= nh
        i = index - nh if mirrored else index
        n1 = self.bands_per_axis
        return i // (n1 * n1), (i // n1) % n1, i % n1, mirrored

    def halfplane_kernels(self):
        return self.kernels[: self.n_halfplane]

    def boundary_band_indices(self):
        """Half-plane indices whose window touches the Fourier-domain edge."""
        n1 = self.bands_per_axis
        out = [i for i in range(self.n_halfplane)
               if (i % n1 == n1 - 1) or ((i // n1) % n1 == n1 - 1)]
        return tuple(out)


def build_packet_bank(pair, J, center_gridsize=256):
    """Materialize the depth-J complex kernel bank for one filter set."""
    if J not in (1, 2, 3):
        raise ValueError(f"J must be in {{1, 2, 3}}, got {J}")
    atoms, signs, _ = analytic_atoms_1d(pair, J)
    n1 = 2 ** J
    half = []
    for v in (0, 1):
        for p in range(n1):
            row_atom = atoms[p] if v == 0 else atoms[p].conj()
            for q in range(n1):
                half.append(np.outer(row_atom, atoms[q]) / np.sqrt(2.0))
    half = np.array(half)
    kernels = np.concatenate([half, half.conj()], axis=0)
    centers = np.array([spectral_center(k, center_gridsize) for k in kernels])
    fractions = np.array([positive_x_fraction(k, center_gridsize) for k in kernels])
    mask = np.zeros(kernels.shape[0], dtype=bool)
    mask[: half.shape[0]] = True
    return PacketBank(
        depth=J,
        pair=pair,
        kernels=kernels,
        cell_centers=centers,
        halfplane_mask=mask,
        posx_fractions=fractions,
        band_signs=signs,
    )
