"""Smoothed-ball phantoms and measurement noise."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .grid import BoundarySeries


@dataclass(frozen=True)
class BallSpec:
    center: tuple
    radius: float
    amplitude: float = 1.0
    smoothing: float | None = None  # None: two grid steps

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")
        if self.smoothing is not None and not self.smoothing > 0:
            raise ValueError("ball smoothing must be positive")


def smoothstep(u):
    """C1 ramp: 0 below 0, 1 above 1, ``3u^2 - 2u^3`` in between."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def smoothstep_derivative(u):
    u = np.asarray(u, dtype=float)
    return np.where((u > 0) & (u < 1), 6.0 * u * (1.0 - u), 0.0)


def ball_value(spec, points, eps):
    """Value of one smoothed ball at `points` (shape ``(..., dim)``)."""
    r = np.linalg.norm(points - np.asarray(spec.center, dtype=float), axis=-1)
    return spec.amplitude * smoothstep((spec.radius - r) / eps)


def ball_phantom(specs, grid):
    """Sum of smoothed characteristic functions of balls sampled on `grid`."""
    specs = list(specs)
    if not specs:
        raise ValueError("phantom needs at least one ball")
    axes = np.meshgrid(*([grid.x] * grid.dim), indexing="ij")
    points = np.stack(axes, axis=-1)
    out = np.zeros(grid.shape)
    for spec in specs:
        if len(spec.center) != grid.dim:
            raise ValueError(f"ball center {spec.center} is not {grid.dim}D")
        eps = 2.0 * grid.h if spec.smoothing is None else spec.smoothing
        margin = min(min(c, 1.0 - c) for c in spec.center)
        if spec.radius + eps > margin:
            warnings.warn(f"ball at {spec.center} (r={spec.radius}) touches the cavity wall")
        out += ball_value(spec, points, eps)
    return out


def default_balls(dim):
    """Balls centred on the pairwise intersections of the planes ``x_j = 0.25``."""
    if dim == 2:
        return [
            BallSpec((0.25, 0.25), 0.12, 1.0),
            BallSpec((0.60, 0.25), 0.16, 0.7),
            BallSpec((0.25, 0.65), 0.10, 1.2),
        ]
    if dim == 3:
        return [
            BallSpec((0.25, 0.25, 0.25), 0.12, 1.0),
            BallSpec((0.60, 0.25, 0.25), 0.16, 0.7),
            BallSpec((0.25, 0.65, 0.25), 0.10, 1.2),
            BallSpec((0.25, 0.25, 0.70), 0.18, 0.5),
        ]
    raise ValueError(f"dim must be 2 or 3, got {dim}")


def add_noise(g, level, seed=0):
    """Add white Gaussian noise whose L2 norm is exactly ``level * |g|`` over all faces."""
    if level < 0:
        raise ValueError("noise level must be nonnegative")
    if level == 0:
        return g.copy()
    rng = np.random.default_rng(seed)
    noise = {tag: rng.standard_normal(arr.shape) for tag, arr in g.data.items()}
    total = math.sqrt(sum(float(np.sum(n * n)) for n in noise.values()))
    scale = level * g.norm() / total
    return BoundarySeries(g.grid, {tag: g[tag] + scale * noise[tag] for tag in g.faces})
