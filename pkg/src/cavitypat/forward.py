"""Forward map from initial pressure to boundary pressure time series.

The pressure in the sound-hard cavity is the cosine series of the initial field
with every mode oscillating as ``cos(omega t)``. Boundary traces are computed
per face: along the face normal the modes collapse into one time series per
tangential mode, and each time sample is then synthesised tangentially.
"""

import numpy as np

from . import spectral
from ._nufft import cosine_sum_nufft
from ._validation import check_backend, check_volume
from .grid import BoundarySeries, check_face, default_faces

_CHUNK = 1 << 22


def _direct_cosine_sum(coeffs, omegas, t):
    coeffs = np.atleast_2d(coeffs)
    omegas = np.broadcast_to(omegas, coeffs.shape)
    batch, m = coeffs.shape
    out = np.empty((batch, t.size))
    step = max(1, _CHUNK // max(1, m * t.size))
    for b0 in range(0, batch, step):
        phase = omegas[b0 : b0 + step, :, None] * t
        out[b0 : b0 + step] = np.einsum("bm,bmj->bj", coeffs[b0 : b0 + step], np.cos(phase))
    return out


def eval_mode_series(coeffs, omegas, t, backend="direct", tol=1e-6):
    """Evaluate ``s(t_j) = sum_m coeffs[..., m] cos(omegas[..., m] t_j)``.

    Leading axes of `coeffs` are batch axes; `omegas` broadcasts against it.
    The ``"fast"`` backend needs ``t`` uniform and starting at 0.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    t = np.asarray(t, dtype=float)
    if coeffs.shape[-1] != omegas.shape[-1]:
        raise ValueError("coeffs and omegas differ in length")
    if np.any(omegas < 0):
        raise ValueError("frequencies must be nonnegative")
    lead = coeffs.shape[:-1]
    c2 = coeffs.reshape(-1, coeffs.shape[-1])
    o2 = np.broadcast_to(omegas, coeffs.shape).reshape(c2.shape)
    backend = check_backend(backend)
    if backend == "direct":
        out = _direct_cosine_sum(c2, o2, t)
    else:
        dt = t[1] - t[0] if t.size > 1 else 1.0
        if t[0] != 0 or (t.size > 2 and not np.allclose(np.diff(t), dt, rtol=1e-12, atol=0)):
            raise ValueError("fast backend requires a uniform time grid starting at 0")
        out = cosine_sum_nufft(c2, o2, t.size, dt, tol)
    return out.reshape(lead + (t.size,))


def boundary_from_coeffs(coeffs, grid, faces=None, backend="direct", tol=1e-6):
    """Boundary data of the field with cosine coefficients `coeffs` (``(M,) * dim``)."""
    coeffs = np.asarray(coeffs, dtype=float)
    dim = coeffs.ndim
    if dim != grid.dim:
        raise ValueError(f"{dim}D coefficients on a {grid.dim}D grid")
    m = coeffs.shape[0]
    if m > grid.n_nodes:
        raise ValueError(f"truncation {m} exceeds grid size {grid.n_nodes}")
    faces = default_faces(dim) if faces is None else tuple(faces)
    if not faces:
        raise ValueError("no faces requested")
    omega = spectral.omega_table(dim, m)
    t = grid.t
    parity = (-1.0) ** np.arange(m)
    data = {}
    for tag in faces:
        axis, side = check_face(tag, dim)
        ca = np.moveaxis(coeffs, axis, -1)
        if side == 1:
            ca = ca * parity
        series = eval_mode_series(ca, np.moveaxis(omega, axis, -1), t, backend, tol)
        data[tag] = spectral.face_cosine_synth(np.moveaxis(series, -1, 0), grid.n_nodes)
    return BoundarySeries(grid, data)


def simulate_boundary(f, grid, faces=None, backend="direct", tol=1e-6):
    """Apply the forward operator: initial pressure `f` on `grid` to boundary series."""
    f = check_volume(f, grid)
    return boundary_from_coeffs(spectral.cosine_analyze(f), grid, faces, backend, tol)


def pressure_field(f, t):
    """Full interior pressure at time `t` from initial pressure `f` (validation aid)."""
    f = check_volume(f)
    coeffs = spectral.cosine_analyze(f)
    omega = spectral.omega_table(f.ndim, f.shape[0])
    return spectral.cosine_synth(coeffs * np.cos(omega * t), f.shape[0])
