"""Smooth cut-off windows and their tabulated Fourier transforms.

The transform convention is the symmetric one,
``hat(xi) = (2 pi)^(-1/2) * int eta(t) exp(-i xi t) dt``. For an even window this
is a cosine integral, evaluated here by the trapezoid rule on a fine grid (which
converges faster than any power for a compactly supported smooth window) and
read out on a uniform frequency table with one DCT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from ._interp import lagrange4

# frequency beyond which the bump transforms are below double precision
_ALIAS_MARGIN = 1500.0


def _bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


def _bump4(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 4))
    return out


WINDOWS = {"bump": _bump, "bump4": _bump4}


@dataclass(frozen=True)
class WindowTable:
    """A window ``eta`` on [-1, 1] with its Fourier transform tabulated on ``[0, xi_max]``.

    Attributes
    ----------
    kind : str
        Window name, a key of ``WINDOWS``.
    oversample : int
        Resolution factor of both the time quadrature and the frequency table.
    xi_max : float
        Largest frequency the table answers for.
    t, samples : ndarray
        Quadrature nodes on [-1, 1] and the window values there.
    xi_step : float
        Spacing of the frequency table.
    hat_samples : ndarray
        ``hat(k * xi_step)`` for ``k = 0, 1, ...`` (two nodes past `xi_max`).
    hat_zero : float
        ``hat(0)``.
    B : float
        ``max |hat(xi)| (1 + xi^2)`` over the table.
    """

    kind: str
    oversample: int
    xi_max: float
    t: np.ndarray
    samples: np.ndarray
    xi_step: float
    hat_samples: np.ndarray
    hat_zero: float
    B: float

    @property
    def xi(self):
        return np.arange(self.hat_samples.size) * self.xi_step

    def eta(self, t):
        return WINDOWS[self.kind](t)

    def eta_T(self, t, T):
        """The window stretched to ``[-T, T]``."""
        return WINDOWS[self.kind](np.asarray(t, dtype=float) / T)

    def hat(self, xi):
        return eta_hat(self, xi)


def make_window(kind="bump", oversample=8, xi_max=64.0):
    """Tabulate the window `kind` and its Fourier transform up to `xi_max`."""
    if kind not in WINDOWS:
        raise ValueError(f"unknown window kind {kind!r}; choose from {sorted(WINDOWS)}")
    oversample = int(oversample)
    if oversample < 4:
        raise ValueError(f"oversample must be >= 4, got {oversample}")
    if not xi_max > 0:
        raise ValueError(f"xi_max must be positive, got {xi_max}")
    eta = WINDOWS[kind]

    # time nodes j/Q; the trapezoid sum picks up aliases at multiples of 2*pi*Q
    q0 = math.ceil((xi_max + _ALIAS_MARGIN) / (8.0 * math.pi))
    Q = oversample * q0
    r = 32 * oversample
    half = Q * r  # DFT length 2*half gives xi spacing pi / r
    t = np.arange(-Q, Q + 1) / Q
    samples = eta(t)

    seq = np.zeros(half + 1)
    seq[: Q + 1] = samples[Q:]
    xi_step = math.pi / r
    n_tab = int(math.ceil(xi_max / xi_step)) + 3
    if n_tab > half + 1:
        raise ValueError("xi_max too large for the quadrature resolution")
    hat = sfft.dct(seq, type=1)[:n_tab] / (Q * math.sqrt(2.0 * math.pi))

    xi = np.arange(n_tab) * xi_step
    B = float(np.max(np.abs(hat) * (1.0 + xi**2)))
    return WindowTable(kind, oversample, float(xi_max), t, samples, xi_step, hat, float(hat[0]), B)


def eta_hat(w, xi):
    """Interpolated window transform at `xi` (even in `xi`)."""
    xi = np.abs(np.asarray(xi, dtype=float))
    if xi.size and np.max(xi) > w.xi_max * (1 + 1e-12):
        raise ValueError(
            f"frequency {np.max(xi):.6g} outside window table (xi_max={w.xi_max:.6g})"
        )
    n = w.hat_samples.size
    return lagrange4(w.hat_samples, xi / w.xi_step, lambda i: np.minimum(np.abs(i), n - 1))


def coupling_constant(dim):
    """The ``12 + c pi^2`` numerator of the contraction bound (c = 17 in 2D, 25 in 3D)."""
    if dim == 2:
        return 12.0 + 17.0 * math.pi**2
    if dim == 3:
        return 12.0 + 25.0 * math.pi**2
    raise ValueError(f"dim must be 2 or 3, got {dim}")


def coupling_bound(B, T, dim):
    """Upper bound ``B (12 + c pi^2) / (6 pi^2 T^2)`` on the coupling operator norm."""
    return B * coupling_constant(dim) / (6.0 * math.pi**2 * T**2)


def sufficient_T(w, dim):
    """Acquisition time above which the coupling operator is guaranteed contractive.

    `w` is a :class:`WindowTable` or a bare decay constant ``B``.
    """
    B = w.B if isinstance(w, WindowTable) else float(w)
    return math.sqrt(B * coupling_constant(dim) / 6.0) / math.pi
