"""Fourier-domain helpers: 2D analytic extension, power spectra, centroids.

The first frequency coordinate xi1 runs along array axis 1 (columns, the
horizontal image axis); xi2 runs along axis 0. All helpers share this
convention.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "hilbert2d", "kernel_spectrum", "positive_x_fraction", "spectral_center",
]


def _default_grid(shape):
    n = 4 * max(shape)
    return n + (n % 2)


def hilbert2d(v, gridsize=None):
    """Analytic extension v + i H(v) along the horizontal frequency axis.

    H multiplies the spectrum by -i sign(xi1), with sign(0) = 0, evaluated
    by FFT on a zero-padded ``gridsize`` x ``gridsize`` grid (defaults to
    four times the kernel size). The input occupies the top-left corner of
    the padded grid; the returned map covers the whole grid.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 2:
        raise ValueError("input must be 2D")
    n = _default_grid(v.shape) if gridsize is None else int(gridsize)
    if n < max(v.shape):
        raise ValueError(f"gridsize {n} smaller than kernel {v.shape}")
    spec = np.fft.fft2(v, (n, n))
    sign = np.sign(np.fft.fftfreq(n))[None, :]
    analytic = spec * (1.0 + sign)
    return np.fft.ifft2(analytic)


def kernel_spectrum(kernel, gridsize=None):
    """DC-centered power spectrum |DFT|^2 on a ``gridsize``-squared grid."""
    kernel = np.asarray(kernel)
    if kernel.ndim != 2:
        raise ValueError("kernel must be 2D")
    n = _default_grid(kernel.shape) if gridsize is None else int(gridsize)
    if n < max(kernel.shape):
        raise ValueError(f"gridsize {n} smaller than kernel {kernel.shape}")
    return np.fft.fftshift(np.abs(np.fft.fft2(kernel, (n, n))) ** 2)


def positive_x_fraction(kernel, gridsize=256):
    """Fraction of spectral energy at xi1 >= 0 (Nyquist column split evenly)."""
    power = np.abs(np.fft.fft2(kernel, (gridsize, gridsize))) ** 2
    half = gridsize // 2
    pos = power[:, 0].sum() + 0.5 * power[:, half].sum() + power[:, 1:half].sum()
    return float(pos / power.sum())


def spectral_center(kernel, gridsize=256):
    """Circular power-weighted centroid (xi1, xi2) in (-pi, pi]^2."""
    power = np.abs(np.fft.fft2(kernel, (gridsize, gridsize))) ** 2
    omega = np.exp(1j * 2.0 * np.pi * np.fft.fftfreq(gridsize))
    xi1 = np.angle((power.sum(axis=0) * omega).sum())
    xi2 = np.angle((power.sum(axis=1) * omega).sum())
    return float(xi1), float(xi2)
