"""Binary volume and boundary files: ASCII header lines, then little-endian float64.

Volume file::

    RCVOL 1
    <dim> <n_nodes>
    <n_nodes**dim doubles, x1 slowest>

Boundary file::

    RCBND 1
    <dim> <n_nodes> <n_time> <n_faces>
    per face: <tag>\\n followed by n_time blocks of tangential samples

The boundary header does not carry ``dt``; readers pass it in (default ``h``).
"""

import numpy as np

from ._validation import check_volume
from .grid import BoundarySeries, Grid, check_face

VOLUME_MAGIC = b"RCVOL 1"
BOUNDARY_MAGIC = b"RCBND 1"
_F8 = np.dtype("<f8")


class FormatError(ValueError):
    pass


def _int_fields(line, count, what):
    parts = line.split()
    if len(parts) != count:
        raise FormatError(f"{what} header needs {count} integers, got {line!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"{what} header is not integer: {line!r}") from None


def _readline(fh, what):
    line = fh.readline()
    if not line.endswith(b"\n"):
        raise FormatError(f"truncated {what}")
    return line[:-1].decode("ascii", errors="replace")


def _read_doubles(fh, count, what):
    raw = fh.read(count * 8)
    if len(raw) != count * 8:
        raise FormatError(f"{what}: expected {count} values, got {len(raw) // 8}")
    return np.frombuffer(raw, dtype=_F8).astype(float)


def write_volume(path, f):
    f = check_volume(f)
    with open(path, "wb") as fh:
        fh.write(VOLUME_MAGIC + b"\n")
        fh.write(f"{f.ndim} {f.shape[0]}\n".encode("ascii"))
        fh.write(np.ascontiguousarray(f, dtype=_F8).tobytes())


def read_volume(path):
    with open(path, "rb") as fh:
        if fh.readline().rstrip(b"\n") != VOLUME_MAGIC:
            raise FormatError(f"{path}: not a volume file")
        dim, n = _int_fields(_readline(fh, "volume header"), 2, "volume")
        if dim not in (2, 3) or n < 3:
            raise FormatError(f"{path}: bad volume header dim={dim} n_nodes={n}")
        data = _read_doubles(fh, n**dim, str(path))
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after volume data")
    return data.reshape((n,) * dim)


def write_boundary(path, g):
    grid = g.grid
    with open(path, "wb") as fh:
        fh.write(BOUNDARY_MAGIC + b"\n")
        fh.write(f"{grid.dim} {grid.n_nodes} {grid.n_time} {len(g.faces)}\n".encode("ascii"))
        for tag in g.faces:
            fh.write(tag.encode("ascii") + b"\n")
            fh.write(np.ascontiguousarray(g[tag], dtype=_F8).tobytes())


def read_boundary(path, dt=None):
    """Read a boundary file; `dt` defaults to the spatial step of the stored grid."""
    with open(path, "rb") as fh:
        if fh.readline().rstrip(b"\n") != BOUNDARY_MAGIC:
            raise FormatError(f"{path}: not a boundary file")
        dim, n, n_time, n_faces = _int_fields(_readline(fh, "boundary header"), 4, "boundary")
        try:
            grid = Grid(dim, n, 1.0 / (n - 1) if dt is None else float(dt), n_time)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"{path}: {exc}") from None
        if not 1 <= n_faces <= 2 * dim:
            raise FormatError(f"{path}: bad face count {n_faces}")
        shape = grid.face_shape()
        data = {}
        for _ in range(n_faces):
            tag = _readline(fh, "face tag")
            try:
                check_face(tag, dim)
            except ValueError as exc:
                raise FormatError(f"{path}: {exc}") from None
            if tag in data:
                raise FormatError(f"{path}: duplicate face {tag}")
            data[tag] = _read_doubles(fh, int(np.prod(shape)), f"{path} face {tag}").reshape(shape)
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after boundary data")
    return BoundarySeries(grid, data)
