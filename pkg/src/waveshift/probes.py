"""Test signals: analytic sinusoid probes and natural-image surrogates.

Sinusoid probes are evaluated in closed form at arbitrary (fractional)
shifts, which sidesteps interpolation and boundary effects entirely: the
response of a kernel to cos(<w, n> + phi) follows from its transfer
function at +-w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ops import max_pool

__all__ = [
    "ToneProbe", "dtft2", "tone_conv", "random_inband_tone",
    "rmax_tone", "cmod_tone", "pink_image",
]


def dtft2(kernel, xi):
    """Transfer value W(xi) = sum_t k[t] e^{-i <xi, t>}, support anchored at 0."""
    ny, nx = kernel.shape
    row = np.exp(-1j * xi[1] * np.arange(ny))
    col = np.exp(-1j * xi[0] * np.arange(nx))
    return row @ kernel @ col


@dataclass(frozen=True)
class ToneProbe:
    """A real sinusoid a cos(w1 n1 + w2 n2 + phi); n1 is horizontal."""

    w1: float
    w2: float
    amp: float = 1.0
    phase: float = 0.0

    def sample(self, shape, shift=(0.0, 0.0), stride=1):
        """Evaluate the probe shifted by ``shift`` pixels on a strided grid."""
        ny, nx = shape
        yy = (np.arange(ny) * stride)[:, None]
        xx = (np.arange(nx) * stride)[None, :]
        arg = (self.w1 * (xx - shift[0]) + self.w2 * (yy - shift[1]) + self.phase)
        return self.amp * np.cos(arg)


def tone_conv(kernel, probe: ToneProbe, shape, shift=(0.0, 0.0), stride=1):
    """Exact response (x (star) kernel) of the shifted probe on a strided grid.

    Boundary-free: the probe extends over all of Z^2.
    """
    ny, nx = shape
    yy = (np.arange(ny) * stride)[:, None]
    xx = (np.arange(nx) * stride)[None, :]
    arg = probe.w1 * (xx - shift[0]) + probe.w2 * (yy - shift[1]) + probe.phase
    w_plus = dtft2(kernel, (-probe.w1, -probe.w2))   # sum k[t] e^{+i<w,t>}
    w_minus = dtft2(kernel, (probe.w1, probe.w2))
    return 0.5 * probe.amp * (np.exp(1j * arg) * w_plus
                              + np.exp(-1j * arg) * w_minus)


def random_inband_tone(center, bandwidth, rng, spread=0.8):
    """Random tone with frequency inside a spectral window."""
    w1 = center[0] + (rng.random() - 0.5) * bandwidth * spread
    w2 = center[1] + (rng.random() - 0.5) * bandwidth * spread
    return ToneProbe(w1=w1, w2=w2, amp=0.5 + rng.random(),
                     phase=rng.random() * 2.0 * np.pi)


def rmax_tone(kernel_real, probe, out_shape, shift, m):
    """RMax response to an analytic probe: stride-m conv then 3x3/2 max pool."""
    dense_shape = (2 * out_shape[0], 2 * out_shape[1])
    y = tone_conv(kernel_real, probe, dense_shape, shift, stride=m).real
    return max_pool(y)


def cmod_tone(kernel, probe, out_shape, shift, m):
    """CMod response to an analytic probe: stride-2m complex conv, modulus."""
    z = tone_conv(kernel, probe, out_shape, shift, stride=2 * m)
    return np.abs(z)


def pink_image(n, rng, alpha=1.0, offset=0.5):
    """Random field with a 1/f^alpha spectrum, rescaled to [offset, offset+1].

    Serves as a reproducible stand-in for natural photographs: strong DC,
    decaying spectrum, random phase.
    """
    f1 = np.fft.fftfreq(n)[None, :]
    f2 = np.fft.fftfreq(n)[:, None]
    radius = np.hypot(f1, f2)
    amp = 1.0 / (radius + 1.0 / n) ** alpha
    amp[0, 0] = 0.0
    spectrum = amp * np.exp(2j * np.pi * rng.random((n, n)))
    img = np.fft.ifft2(spectrum).real
    img -= img.min()
    peak = img.max()
    if peak > 0:
        img /= peak
    return img + offset
