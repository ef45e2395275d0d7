"""Reconstruction of the initial pressure from boundary time series.

The crude inverse ``R`` reads each cosine coefficient off the windowed spectrum
of one face's tangential mode series at the mode's eigenfrequency. Exact data
satisfy ``(I + A) F = R g`` with a coupling operator ``A`` that is small for
long acquisitions, so the production path is the residual iteration

    f[0] = synth(R g),    f[K] = f[K-1] + synth(R (g - W f[K-1])).

``A`` itself, its Neumann series and a dense solve exist as oracles at small
truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from . import spectral
from ._interp import lagrange4
from ._validation import check_backend, check_coeffs
from .forward import simulate_boundary
from .grid import BoundarySeries, Grid, all_faces, default_faces, face_tag, parse_face
from .window import WindowTable, eta_hat, coupling_bound, make_window

_CHUNK = 1 << 22


@dataclass
class ReconConfig:
    """Everything the reconstruction needs besides the data.

    `window` is built from `window_kind` / `window_oversample` when not given,
    sized to cover every frequency the coupling operator touches.
    """

    grid: Grid
    trunc: int | None = None
    iterations: int = 2
    faces: tuple | None = None
    window_kind: str = "bump"
    window_oversample: int = 8
    freq_oversample: int = 8
    backend: str = "fast"
    six_face: bool = False
    nufft_tol: float = 1e-6
    early_stop: bool = False
    window: WindowTable | None = field(default=None, repr=False)

    def __post_init__(self):
        g = self.grid
        self.trunc = g.n_nodes if self.trunc is None else int(self.trunc)
        if not 1 <= self.trunc <= g.n_nodes:
            raise ValueError(f"trunc must be in [1, {g.n_nodes}], got {self.trunc}")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        check_backend(self.backend)
        if self.freq_oversample < 2:
            raise ValueError("freq_oversample must be >= 2")
        if self.faces is None:
            self.faces = all_faces(g.dim) if self.six_face else default_faces(g.dim)
        self.faces = tuple(self.faces)
        needed = all_faces(g.dim) if self.six_face else default_faces(g.dim)
        missing = [f for f in needed if f not in self.faces]
        if missing:
            raise ValueError(f"face set lacks {', '.join(missing)}")
        xi_needed = 2.0 * self.T * omega_max(g.dim, self.trunc)
        if self.window is None:
            self.window = make_window(self.window_kind, self.window_oversample, max(xi_needed, 16.0))
        elif self.window.xi_max < xi_needed:
            raise ValueError(
                f"window table reaches xi={self.window.xi_max:.4g}, need {xi_needed:.4g}"
            )

    @property
    def T(self):
        return self.grid.T

    @property
    def dim(self):
        return self.grid.dim


def omega_max(dim, trunc):
    return math.pi * math.sqrt(dim) * (trunc - 1)


def face_assignment(dim, trunc):
    """Axis whose zero face supplies the equation for each coefficient.

    2D: ``l >= k`` reads face ``x2 = 0``, ``k > l`` reads ``x1 = 0``. 3D:
    ``k >= l, k >= n`` reads ``x1 = 0``; ``l > k, l >= n`` reads ``x2 = 0``;
    ``n > l, n > k`` reads ``x3 = 0``. The all-zero mode always reads ``x2 = 0``.
    """
    idx = np.indices((trunc,) * dim)
    if dim == 2:
        k, l = idx
        out = np.where(l >= k, 1, 0)
    elif dim == 3:
        k, l, n = idx
        out = np.where((k >= l) & (k >= n), 0, np.where((l > k) & (l >= n), 1, 2))
    else:
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    out[(0,) * dim] = 1
    return out


def _spectrum_weights(n_time, dt, T, w):
    t = np.arange(n_time) * dt
    wts = w.eta_T(t, T) * dt / math.sqrt(2.0 * math.pi)
    wts[1:] *= 2.0  # even extension to [-T, T]
    return t, wts


def _fast_half(n_time, freq_oversample):
    # 2*half must factor well; padding beyond (n-1)*oversample only refines the grid
    m = sfft.next_fast_len(2 * (n_time - 1) * int(freq_oversample))
    while m % 2:
        m = sfft.next_fast_len(m + 1)
    return m // 2


def windowed_spectrum(series, dt, w, targets, backend="direct", freq_oversample=8):
    """Fourier transform of the evenly extended, windowed series at `targets`.

    `series` has shape ``(..., n_time)`` sampled at ``t_j = j dt`` on ``[0, T]``;
    `targets` has shape ``(..., p)`` with the same leading axes (or is 1D and
    shared). Returns ``(2 pi)^(-1/2) int_{-T}^{T} eta(t/T) g(t) exp(-i xi t) dt``
    by the trapezoid rule, either per target (``"direct"``) or by one zero-padded
    FFT per series followed by cubic Lagrange interpolation (``"fast"``).
    """
    series = np.asarray(series, dtype=float)
    targets = np.asarray(targets, dtype=float)
    n = series.shape[-1]
    T = (n - 1) * dt
    lead = series.shape[:-1]
    s2 = series.reshape(-1, n)
    p = targets.shape[-1]
    t2 = np.broadcast_to(targets, lead + (p,)).reshape(-1, p)
    t, wts = _spectrum_weights(n, dt, T, w)
    weighted = s2 * wts
    out = np.empty(t2.shape)
    backend = check_backend(backend)
    if backend == "direct":
        step = max(1, _CHUNK // max(1, p * n))
        for b0 in range(0, s2.shape[0], step):
            phase = t2[b0 : b0 + step, :, None] * t
            out[b0 : b0 + step] = np.einsum("bj,bpj->bp", weighted[b0 : b0 + step], np.cos(phase))
    else:
        half = _fast_half(n, freq_oversample)
        period = 2 * half
        dxi = math.pi / (half * dt)

        def index(i):
            i = np.mod(i, period)
            return np.where(i > half, period - i, i)

        step = max(1, _CHUNK // (half + 1))
        for b0 in range(0, s2.shape[0], step):
            block = np.zeros((min(step, s2.shape[0] - b0), half + 1))
            block[:, :n] = weighted[b0 : b0 + step]
            block[:, 1:n] *= 0.5  # DCT-I doubles interior terms itself
            spec = sfft.dct(block, type=1, axis=-1)
            out[b0 : b0 + step] = lagrange4(spec, t2[b0 : b0 + step] / dxi, index)
    return out.reshape(lead + (p,))


def _face_spectra(g, cfg, axis, side=0):
    """Windowed spectra of one face's mode series at the eigenfrequencies along `axis`."""
    m = cfg.trunc
    tag = face_tag(axis, side)
    if tag not in g:
        raise KeyError(f"boundary data lacks face {tag}")
    modes = spectral.face_cosine_analyze(g[tag], m)
    series = np.moveaxis(modes, 0, -1)
    omega = np.moveaxis(spectral.omega_table(cfg.dim, m), axis, -1)
    vals = windowed_spectrum(series, cfg.grid.dt, cfg.window, omega, cfg.backend, cfg.freq_oversample)
    return np.moveaxis(vals, -1, axis)


def initial_coeffs(g, cfg):
    """Apply the crude inverse ``R``: boundary data to approximate cosine coefficients."""
    if g.grid != cfg.grid:
        raise ValueError("boundary data grid differs from the configuration grid")
    dim = cfg.dim
    assign = face_assignment(dim, cfg.trunc)
    scale = 2.0 / (cfg.T * cfg.window.hat_zero)
    F0 = np.zeros((cfg.trunc,) * dim)
    for axis in range(dim):
        vals = _face_spectra(g, cfg, axis)
        F0 = np.where(assign == axis, scale * vals, F0)
    F0[(0,) * dim] *= 0.5  # the zero frequency delta pair coalesces
    return F0


class CouplingOperator:
    """Truncated coupling operator ``A`` held as one ``(M, M)`` block per line.

    For rows assigned to axis ``a`` the operator couples only coefficients that
    differ in index ``a``; ``blocks[a][o, l, m]`` is the weight of ``H[.., m, ..]``
    in row ``E[.., l, ..]`` where ``o`` enumerates the other indices.
    """

    def __init__(self, cfg):
        self.dim = cfg.dim
        self.trunc = m = cfg.trunc
        w, T = cfg.window, cfg.T
        self.assign = face_assignment(self.dim, m)
        omega = spectral.omega_table(self.dim, m)
        self.blocks = []
        for axis in range(self.dim):
            om = np.moveaxis(omega, axis, -1).reshape(-1, m)
            lo, mo = om[:, :, None], om[:, None, :]
            c = (eta_hat(w, T * (lo - mo)) + eta_hat(w, T * (lo + mo))) / w.hat_zero
            c -= np.eye(m)
            if axis == 1:
                c[0, 0, :] = 0.5 * (c[0, 0, :] + np.eye(m)[0]) - np.eye(m)[0]
            self.blocks.append(c)

    def _line_shape(self, axis):
        shape = [self.trunc] * self.dim
        del shape[axis]
        return tuple(shape) + (self.trunc,)

    def apply(self, H):
        H = check_coeffs(H, self.dim)
        if H.shape[0] != self.trunc:
            raise ValueError(f"expected {self.trunc} modes per axis, got {H.shape[0]}")
        E = np.zeros_like(H)
        for axis, c in enumerate(self.blocks):
            ha = np.moveaxis(H, axis, -1).reshape(-1, self.trunc)
            ea = np.einsum("olm,om->ol", c, ha).reshape(self._line_shape(axis))
            E = np.where(self.assign == axis, np.moveaxis(ea, -1, axis), E)
        return E

    def row_abs_sums(self):
        out = np.zeros((self.trunc,) * self.dim)
        for axis, c in enumerate(self.blocks):
            sa = np.abs(c).sum(axis=-1).reshape(self._line_shape(axis))
            out = np.where(self.assign == axis, np.moveaxis(sa, -1, axis), out)
        return out

    def norm_inf(self):
        return float(self.row_abs_sums().max())

    def matrix(self):
        """Dense matrix of ``A`` on the flattened coefficient vector, built column by column."""
        size = self.trunc**self.dim
        mat = np.empty((size, size))
        e = np.zeros(size)
        for j in range(size):
            e[j] = 1.0
            mat[:, j] = self.apply(e.reshape((self.trunc,) * self.dim)).ravel()
            e[j] = 0.0
        return mat


def apply_A_dense(H, cfg):
    """``E = A H`` by explicit summation of the window couplings."""
    return CouplingOperator(cfg).apply(H)


def neumann_coeffs(F0, cfg, K, op=None):
    """K steps of ``F <- F0 - A F`` starting from ``F0``."""
    F0 = check_coeffs(F0, cfg.dim)
    op = CouplingOperator(cfg) if op is None else op
    F = F0.copy()
    for _ in range(int(K)):
        F = F0 - op.apply(F)
    return F


def dense_solve(F0, cfg, op=None):
    """Solve ``(I + A) F = F0`` directly on the truncated coefficient space."""
    F0 = check_coeffs(F0, cfg.dim)
    op = CouplingOperator(cfg) if op is None else op
    mat = op.matrix()
    mat[np.diag_indices_from(mat)] += 1.0
    try:
        sol = np.linalg.solve(mat, F0.ravel())
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"I + A is singular at truncation {cfg.trunc}") from exc
    return sol.reshape(F0.shape)


def contraction_bound(cfg, op=None):
    """Measured induced infinity-norm of the truncated ``A`` and the closed-form bound."""
    op = CouplingOperator(cfg) if op is None else op
    return op.norm_inf(), coupling_bound(cfg.window.B, cfg.T, cfg.dim)


def crude_inverse(g, cfg):
    """``synth(R g)`` on the configuration grid."""
    return spectral.cosine_synth(initial_coeffs(g, cfg), cfg.grid.n_nodes)


def reconstruct(g, cfg, return_residuals=False):
    """Residual iteration from three-face (2D: two-face) data.

    Returns the iterates ``f[0] .. f[K]``; with `return_residuals` also the
    boundary residual norms ``|g - W f[K]|`` for each returned iterate. With
    ``cfg.early_stop`` the iteration halts once that residual grows.
    """
    faces = default_faces(cfg.dim)
    g = g.select(faces)
    f = crude_inverse(g, cfg)
    iterates, residuals = [f], []
    for _ in range(cfg.iterations + 1):
        resid = g - simulate_boundary(f, cfg.grid, faces, cfg.backend, cfg.nufft_tol)
        residuals.append(resid.norm())
        if len(residuals) > 1 and cfg.early_stop and residuals[-1] > residuals[-2]:
            iterates.pop()
            residuals.pop()
            break
        if len(iterates) > cfg.iterations:
            break
        f = f + crude_inverse(resid, cfg)
        iterates.append(f)
    if return_residuals:
        return iterates, residuals
    return iterates


def reflect_boundary(g):
    """Data on the faces ``x_j = 1`` re-expressed as zero-face data of the mirrored cavity."""
    dim = g.grid.dim
    data = {}
    for tag in g.faces:
        axis, side = parse_face(tag)
        if side == 1:
            data[face_tag(axis, 0)] = np.flip(g[tag], axis=tuple(range(1, dim)))
    return BoundarySeries(g.grid, data)


def _two_sided_inverse(g, cfg):
    near = crude_inverse(g.select(default_faces(cfg.dim)), cfg)
    far = np.flip(crude_inverse(reflect_boundary(g), cfg))
    return 0.5 * (near + far)


def six_face_reconstruct(g, cfg, return_iterates=False, average="steps"):
    """Reconstruction from all ``2 d`` faces.

    ``average="steps"`` (default) averages the near-face and far-face updates
    inside every iteration, with residuals taken on all faces. At ``T = 1``
    each one-sided coupling operator has norm above one, and only the jointly
    averaged update contracts. ``average="final"`` runs two independent
    three-face reconstructions and averages their final iterates.
    """
    if average not in ("steps", "final"):
        raise ValueError(f"average must be 'steps' or 'final', got {average!r}")
    faces = all_faces(cfg.dim)
    g = g.select(faces)
    if average == "final":
        near = reconstruct(g, cfg)
        far = [np.flip(f) for f in reconstruct(reflect_boundary(g), cfg)]
        iterates = [0.5 * (a + b) for a, b in zip(near, far)]
    else:
        f = _two_sided_inverse(g, cfg)
        iterates = [f]
        for _ in range(cfg.iterations):
            resid = g - simulate_boundary(f, cfg.grid, faces, cfg.backend, cfg.nufft_tol)
            f = f + _two_sided_inverse(resid, cfg)
            iterates.append(f)
    return iterates if return_iterates else iterates[-1]
