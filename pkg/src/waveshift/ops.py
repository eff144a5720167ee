"""Spatial operators: strided cross-correlation, pooling, modulus, blur.

Cross-correlation follows ``(x (star) v)[n] = sum_k x[n + k] v[k]`` with the
kernel support anchored at ``origin``. Boundary policies: "symmetric"
(half-sample reflection), "periodic", "zero" for same-size outputs, or
mode="valid" for interior-only outputs.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = [
    "cross_correlate", "subsample", "conv_layer", "relu", "bias_relu",
    "max_pool", "modulus", "rmax", "cmod", "blur_pool", "binomial_kernel",
]

_PAD_MODES = {"symmetric": "symmetric", "periodic": "wrap", "zero": "constant"}


def _corr_valid_fft(x, v):
    """Interior cross-correlation via zero-padded FFTs (large kernels)."""
    h = x.shape[0] + v.shape[0] - 1
    w = x.shape[1] + v.shape[1] - 1
    spec = np.fft.fft2(x, (h, w)) * np.conj(np.fft.fft2(np.conj(v), (h, w)))
    full = np.fft.ifft2(spec)
    out = full[: x.shape[0] - v.shape[0] + 1, : x.shape[1] - v.shape[1] + 1]
    if not (np.iscomplexobj(x) or np.iscomplexobj(v)):
        return out.real.copy()
    return out.copy()


def _resolve_origin(origin, kshape):
    if origin == "center":
        return (-((kshape[0] - 1) // 2), -((kshape[1] - 1) // 2))
    oy, ox = origin
    return int(oy), int(ox)


def cross_correlate(x, v, origin=(0, 0), mode="same", boundary="symmetric"):
    """Cross-correlate a 2D map with a (possibly complex) kernel.

    Parameters
    ----------
    x : (h, w) ndarray
    v : (kh, kw) ndarray
        Kernel; must be nonempty.
    origin : (int, int) or "center"
        Offset of v[0, 0] in the sum ``sum_k x[n + k + origin] v[k]``.
        "center" anchors the kernel on its central tap.
    mode : "same" or "valid"
        "valid" ignores origin/boundary and returns the
        (h - kh + 1, w - kw + 1) interior.
    boundary : "symmetric", "periodic" or "zero"
    """
    x = np.asarray(x)
    v = np.asarray(v)
    if v.size == 0:
        raise ValueError("empty kernel")
    if x.ndim != 2 or v.ndim != 2:
        raise ValueError("map and kernel must be 2D")
    kh, kw = v.shape
    if mode == "valid":
        if x.shape[0] < kh or x.shape[1] < kw:
            raise ValueError("kernel larger than map in valid mode")
        if v.size > 1024:
            return _corr_valid_fft(x, v)
        windows = sliding_window_view(x, v.shape)
        return np.einsum("ijkl,kl->ij", windows, v)
    if mode != "same":
        raise ValueError(f"unknown mode {mode!r}")
    oy, ox = _resolve_origin(origin, v.shape)
    pre_y, post_y = max(0, -oy), max(0, kh - 1 + oy)
    pre_x, post_x = max(0, -ox), max(0, kw - 1 + ox)
    if boundary not in _PAD_MODES:
        raise ValueError(f"unknown boundary {boundary!r}")
    xp = np.pad(x, ((pre_y, post_y), (pre_x, post_x)), mode=_PAD_MODES[boundary])
    windows = sliding_window_view(xp, v.shape)
    return np.einsum("ijkl,kl->ij", windows[pre_y + oy:, pre_x + ox:][:x.shape[0], :x.shape[1]], v)


def subsample(x, m):
    """Keep every m-th sample per axis: out[n] = x[m n]."""
    if m < 1:
        raise ValueError(f"subsampling factor must be >= 1, got {m}")
    return np.asarray(x)[::m, ::m]


def conv_layer(X, V, m, **corr_kwargs):
    """Multichannel strided correlation: out_l = sum_k (x_k (star) v_lk) down m.

    X is (K, h, w); V is (L, K, kh, kw). Returns (L, h', w').
    """
    X = np.asarray(X)
    V = np.asarray(V)
    if X.ndim != 3 or V.ndim != 4:
        raise ValueError("X must be (K, h, w) and V must be (L, K, kh, kw)")
    if V.shape[1] != X.shape[0]:
        raise ValueError(f"channel mismatch: X has {X.shape[0]}, V expects {V.shape[1]}")
    out = []
    for row in V:
        acc = None
        for xk, vk in zip(X, row):
            term = cross_correlate(xk, vk, **corr_kwargs)
            acc = term if acc is None else acc + term
        out.append(subsample(acc, m))
    return np.stack(out)


def relu(y):
    return np.maximum(0.0, y)


def bias_relu(y, b):
    """relu(y + b) with a scalar bias."""
    return np.maximum(0.0, y + b)


def max_pool(y):
    """3x3-window max on the stride-2 grid, windows clipped at the edges."""
    y = np.asarray(y)
    if np.iscomplexobj(y):
        raise ValueError("max pooling is defined for real maps")
    h, w = y.shape
    out_h, out_w = (h - 1) // 2 + 1, (w - 1) // 2 + 1
    padded = np.full((h + 2, w + 2), -np.inf)
    padded[1:-1, 1:-1] = y
    windows = sliding_window_view(padded, (3, 3))[::2, ::2]
    return windows.max(axis=(2, 3))[:out_h, :out_w]


def modulus(z):
    return np.abs(z)


def rmax(X, V, m, **corr_kwargs):
    """Real conv at stride m, then per-channel 3x3/stride-2 max pooling."""
    if np.iscomplexobj(np.asarray(V)):
        raise ValueError("rmax expects real kernels")
    Y = conv_layer(X, V, m, **corr_kwargs)
    return np.stack([max_pool(ch) for ch in Y])


def cmod(X, W, m, **corr_kwargs):
    """Complex conv at stride 2m, then pointwise modulus."""
    Z = conv_layer(X, W, 2 * m, **corr_kwargs)
    return np.abs(Z)


def binomial_kernel(size):
    """Normalized 2D binomial (Pascal-row outer product) of a given size."""
    if size < 1:
        raise ValueError(f"blur size must be >= 1, got {size}")
    row = np.array([1.0])
    for _ in range(size - 1):
        row = np.convolve(row, [1.0, 1.0])
    row /= row.sum()
    return np.outer(row, row)


def blur_pool(y, size, boundary="symmetric"):
    """Binomial lowpass of the given size followed by subsampling by 2.

    size=1 degenerates to plain subsampling. The filter is anchored with
    floor centering so that odd sizes are symmetric around each kept site.
    """
    kern = binomial_kernel(size)
    origin = (-((size - 1) // 2), -((size - 1) // 2))
    blurred = cross_correlate(y, kern, origin=origin, boundary=boundary)
    return subsample(blurred, 2)
