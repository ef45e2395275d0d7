"""Input checks shared by the functional API and the estimators."""

import numpy as np

BACKENDS = ("direct", "fast")


def check_backend(backend):
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
    return backend


def check_volume(f, grid=None):
    """Return `f` as a float array after checking it is a finite cubic nodal field."""
    f = np.asarray(f, dtype=float)
    if f.ndim not in (2, 3):
        raise ValueError(f"volume must be 2D or 3D, got {f.ndim} dimensions")
    if len(set(f.shape)) != 1:
        raise ValueError(f"volume must have equal sides, got shape {f.shape}")
    if f.shape[0] < 3:
        raise ValueError("volume needs at least 3 nodes per axis")
    if grid is not None and f.shape != grid.shape:
        raise ValueError(f"volume shape {f.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("volume contains non-finite values")
    return f


def check_coeffs(F, dim=None):
    F = np.asarray(F, dtype=float)
    if len(set(F.shape)) != 1 or F.ndim not in (2, 3):
        raise ValueError(f"coefficient tensor must be (M,)*dim with dim 2 or 3, got {F.shape}")
    if dim is not None and F.ndim != dim:
        raise ValueError(f"expected {dim}D coefficients, got {F.ndim}D")
    if not np.all(np.isfinite(F)):
        raise ValueError("coefficient tensor contains non-finite values")
    return F
