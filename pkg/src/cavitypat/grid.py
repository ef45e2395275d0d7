"""Space-time grids, face identifiers and the boundary data container."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

_FACE_RE = re.compile(r"^X([123])_([01])$")


@dataclass(frozen=True)
class Grid:
    """Boundary-inclusive node grid on the unit square/cube plus a uniform time axis.

    Spatial nodes sit at ``x_j = j / (n_nodes - 1)``; time samples at ``t_j = j * dt``
    for ``j = 0 .. n_time - 1``. The sound speed is 1.
    """

    dim: int
    n_nodes: int
    dt: float
    n_time: int

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if self.n_nodes < 3:
            raise ValueError(f"n_nodes must be >= 3, got {self.n_nodes}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_time < 2:
            raise ValueError(f"n_time must be >= 2, got {self.n_time}")

    @classmethod
    def from_T(cls, dim, n_nodes, T=2.0, dt=None):
        """Grid with acquisition time `T`; `dt` defaults to the spatial step."""
        h = 1.0 / (n_nodes - 1)
        dt = h if dt is None else float(dt)
        steps = T / dt
        n_steps = int(round(steps))
        if n_steps < 1 or abs(steps - n_steps) > 1e-9 * max(1.0, steps):
            raise ValueError(f"T={T} is not an integer multiple of dt={dt}")
        return cls(dim, n_nodes, dt, n_steps + 1)

    @property
    def h(self):
        return 1.0 / (self.n_nodes - 1)

    @property
    def T(self):
        return (self.n_time - 1) * self.dt

    @property
    def x(self):
        return np.linspace(0.0, 1.0, self.n_nodes)

    @property
    def t(self):
        return np.arange(self.n_time) * self.dt

    @property
    def shape(self):
        return (self.n_nodes,) * self.dim

    def face_shape(self):
        return (self.n_time,) + (self.n_nodes,) * (self.dim - 1)

    def with_T(self, T):
        return Grid.from_T(self.dim, self.n_nodes, T, self.dt)


def parse_face(tag):
    """Split a face tag like ``"X2_0"`` into (normal axis, side)."""
    m = _FACE_RE.match(tag)
    if m is None:
        raise ValueError(f"bad face identifier {tag!r}")
    return int(m.group(1)) - 1, int(m.group(2))


def face_tag(axis, side):
    return f"X{axis + 1}_{side}"


def default_faces(dim, side=0):
    return tuple(face_tag(a, side) for a in range(dim))


def all_faces(dim):
    return default_faces(dim, 0) + default_faces(dim, 1)


def check_face(tag, dim):
    axis, side = parse_face(tag)
    if axis >= dim:
        raise ValueError(f"face {tag} does not exist in {dim}D")
    return axis, side


@dataclass
class BoundarySeries:
    """Pressure time series on a set of cavity faces.

    ``data[tag]`` has shape ``(n_time, n_nodes[, n_nodes])``: time first, then the
    tangential axes in increasing axis order.
    """

    grid: Grid
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        for tag, arr in list(self.data.items()):
            check_face(tag, self.grid.dim)
            arr = np.asarray(arr, dtype=float)
            if arr.shape != self.grid.face_shape():
                raise ValueError(
                    f"face {tag}: expected shape {self.grid.face_shape()}, got {arr.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"face {tag}: non-finite samples")
            self.data[tag] = arr

    @property
    def faces(self):
        return tuple(self.data)

    def __getitem__(self, tag):
        return self.data[tag]

    def __contains__(self, tag):
        return tag in self.data

    def select(self, faces):
        missing = [f for f in faces if f not in self.data]
        if missing:
            raise KeyError(f"missing faces: {', '.join(missing)}")
        return BoundarySeries(self.grid, {f: self.data[f] for f in faces})

    def _combine(self, other, op):
        if not isinstance(other, BoundarySeries):
            return NotImplemented
        if other.grid != self.grid or set(other.faces) != set(self.faces):
            raise ValueError("boundary series live on different grids or faces")
        return BoundarySeries(self.grid, {f: op(self.data[f], other.data[f]) for f in self.faces})

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, scalar):
        return BoundarySeries(self.grid, {f: scalar * a for f, a in self.data.items()})

    __rmul__ = __mul__

    def norm(self):
        """Plain Euclidean norm over every sample of every face."""
        return float(np.sqrt(sum(np.sum(a * a) for a in self.data.values())))

    def copy(self):
        return BoundarySeries(self.grid, {f: a.copy() for f, a in self.data.items()})
