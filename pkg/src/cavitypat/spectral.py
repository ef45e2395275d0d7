"""Neumann cosine basis on the unit square/cube.

Coefficients follow the series ``f(x) = sum_k F_k prod_j cos(pi k_j x_j)``. On a
boundary-inclusive grid the matching fast transform is the DCT-I, normalised so
that every on-grid mode (including the Nyquist one) is reproduced exactly.
"""

import numpy as np
import scipy.fft as sfft


def eigenfrequency(idx):
    """Eigenfrequency ``pi * |idx|`` of the cavity mode with multi-index `idx`."""
    idx = np.asarray(idx)
    return np.pi * np.sqrt(np.sum(idx.astype(float) ** 2, axis=-1))


def mode_norm_sq(idx):
    """Squared L2 norm of the mode over the unit square/cube: ``(1/2) ** #nonzero``."""
    idx = np.asarray(idx)
    return 0.5 ** np.count_nonzero(idx, axis=-1)


def omega_table(dim, trunc):
    """Array of shape ``(trunc,) * dim`` holding the eigenfrequency of every mode."""
    i2 = np.arange(trunc, dtype=float) ** 2
    s = np.zeros((trunc,) * dim)
    for a in range(dim):
        s = s + i2.reshape((-1,) + (1,) * (dim - 1 - a))
    return np.pi * np.sqrt(s)


def _endpoint_weights(n):
    # discrete norm of cos(pi k j/(n-1)) under trapezoid weights, relative to interior modes
    c = np.full(n, 2.0)
    c[0] = c[-1] = 1.0
    return c


def _analyze(arr, axes, trunc):
    out = sfft.dctn(arr, type=1, axes=axes)
    for a in axes:
        n = arr.shape[a]
        if trunc > n:
            raise ValueError(f"truncation {trunc} exceeds grid size {n}")
        shape = [1] * arr.ndim
        shape[a] = n
        out *= (_endpoint_weights(n) / (2.0 * (n - 1))).reshape(shape)
    index = tuple(slice(0, trunc) if a in axes else slice(None) for a in range(arr.ndim))
    return out[index]


def _synth(coeffs, axes, n):
    pad = [(0, 0)] * coeffs.ndim
    for a in axes:
        m = coeffs.shape[a]
        if m > n:
            raise ValueError(f"coefficient tensor ({m} modes) larger than grid ({n} nodes)")
        pad[a] = (0, n - m)
    g = np.pad(np.asarray(coeffs, dtype=float), pad)
    for a in axes:
        shape = [1] * g.ndim
        shape[a] = n
        g = g / _endpoint_weights(n).reshape(shape)
    return sfft.dctn(g, type=1, axes=axes)


def cosine_analyze(f, trunc=None):
    """Cosine coefficients of a nodal field, keeping modes ``0 .. trunc-1`` per axis."""
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    trunc = n if trunc is None else int(trunc)
    return _analyze(f, tuple(range(f.ndim)), trunc)


def cosine_synth(coeffs, n_nodes):
    """Sum the cosine series at the nodes of an ``n_nodes`` grid (zero-padding missing modes)."""
    coeffs = np.asarray(coeffs, dtype=float)
    return _synth(coeffs, tuple(range(coeffs.ndim)), n_nodes)


def face_cosine_analyze(face_data, trunc=None):
    """Tangential mode series of face data shaped ``(n_time, n_nodes[, n_nodes])``.

    Returns an array ``(n_time, trunc[, trunc])`` whose entry ``[:, k]`` is
    ``2 * int g(t, x) cos(pi k x) dx`` (factor 1 for the zero mode).
    """
    face_data = np.asarray(face_data, dtype=float)
    n = face_data.shape[1]
    trunc = n if trunc is None else int(trunc)
    return _analyze(face_data, tuple(range(1, face_data.ndim)), trunc)


def face_cosine_synth(mode_series, n_nodes):
    """Inverse of :func:`face_cosine_analyze` (time axis first)."""
    mode_series = np.asarray(mode_series, dtype=float)
    return _synth(mode_series, tuple(range(1, mode_series.ndim)), n_nodes)
