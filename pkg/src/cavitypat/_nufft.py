"""Batched 1D type-1 nonuniform FFT for cosine sums on a uniform time grid.

Gaussian gridding after Greengard & Lee (SIAM Review 46, 2004): each frequency is
spread onto an oversampled periodic grid, one FFT follows, and the Gaussian is
divided out in the output domain.
"""

import math

import numpy as np
import scipy.fft as sfft

# spreading half-width per decimal digit of accuracy at oversampling 2
_MIN_TOL = 1e-14
_CHUNK = 1 << 22


def spread_width(tol):
    if not (_MIN_TOL <= tol < 1):
        raise ValueError(
            f"NUFFT tolerance {tol:g} unachievable; must lie in [{_MIN_TOL:g}, 1)"
        )
    return max(2, int(math.ceil(-math.log10(tol))) + 1)


def cosine_sum_nufft(coeffs, omegas, n_time, dt, tol=1e-6):
    """``s[b, j] = sum_m coeffs[b, m] * cos(omegas[b, m] * j * dt)`` for ``j < n_time``."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
    omegas = np.broadcast_to(np.asarray(omegas, dtype=float), coeffs.shape)
    msp = spread_width(tol)
    n = int(n_time)
    nr = sfft.next_fast_len(max(2 * n, 4 * msp + 2))
    ratio = nr / n
    tau = math.pi * msp / (n * n * ratio * (ratio - 0.5))
    j0 = n // 2

    batch, m = coeffs.shape
    out = np.empty((batch, n))
    step = max(1, _CHUNK // max(1, m * 2 * msp))
    offsets = np.arange(-msp + 1, msp + 1)
    k = np.arange(n) - j0
    deconv = math.sqrt(math.pi / tau) * np.exp(k * k * tau) / nr
    for b0 in range(0, batch, step):
        c = coeffs[b0 : b0 + step]
        x = np.mod(omegas[b0 : b0 + step] * dt, 2.0 * math.pi)
        nb = c.shape[0]
        # shift outputs to j - j0 so the deconvolution stays centred
        cshift = c * np.exp(-1j * j0 * x)
        q0 = np.floor(x * nr / (2.0 * math.pi)).astype(np.int64)
        q = q0[..., None] + offsets
        d = x[..., None] - 2.0 * math.pi * q / nr
        w = np.exp(-d * d / (4.0 * tau)) * cshift[..., None]
        flat = (np.mod(q, nr) + nr * np.arange(nb)[:, None, None]).ravel()
        grid = np.bincount(flat, w.real.ravel(), nb * nr) + 1j * np.bincount(
            flat, w.imag.ravel(), nb * nr
        )
        spec = sfft.fft(grid.reshape(nb, nr), axis=-1)
        out[b0 : b0 + nb] = (spec[:, np.mod(k, nr)] * deconv).real
    return out
