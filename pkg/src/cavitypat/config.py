"""Run configuration files.

Sections hold ``key = value`` lines; ``#`` starts a comment. Indented lines
continue the previous value, which is how ``balls`` lists one ball per line as
``c1 c2 [c3] radius amplitude``::

    [grid]
    dim = 2
    n_nodes = 129
    T = 2

    [phantom]
    balls =
        0.25 0.25 0.12 1.0
        0.60 0.25 0.16 0.7

Every error names the offending line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .grid import Grid, check_face
from .inversion import ReconConfig
from .phantom import BallSpec, default_balls


class ConfigError(ValueError):
    pass


def _to_bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _to_faces(text):
    return tuple(text.replace(",", " ").split())


def _to_opt_int(text):
    return None if text.lower() == "none" else int(text)


def _to_opt_float(text):
    return None if text.lower() == "none" else float(text)


# (section, key) -> (RunConfig field, converter)
_KEYS = {
    ("grid", "dim"): ("dim", int),
    ("grid", "n_nodes"): ("n_nodes", int),
    ("grid", "dt"): ("dt", _to_opt_float),
    ("grid", "n_time"): ("n_time", _to_opt_int),
    ("grid", "t"): ("T", _to_opt_float),
    ("window", "kind"): ("window_kind", str),
    ("window", "oversample"): ("window_oversample", int),
    ("phantom", "balls"): ("balls", None),
    ("phantom", "smoothing"): ("smoothing", _to_opt_float),
    ("recon", "trunc"): ("trunc", _to_opt_int),
    ("recon", "iterations"): ("iterations", int),
    ("recon", "faces"): ("faces", _to_faces),
    ("recon", "six_face"): ("six_face", _to_bool),
    ("recon", "freq_oversample"): ("freq_oversample", int),
    ("recon", "backend"): ("backend", str),
    ("recon", "nufft_tol"): ("nufft_tol", float),
    ("recon", "early_stop"): ("early_stop", _to_bool),
    ("noise", "level"): ("noise_level", float),
    ("noise", "seed"): ("noise_seed", int),
}


@dataclass
class RunConfig:
    dim: int = 2
    n_nodes: int = 129
    dt: float | None = None
    n_time: int | None = None
    T: float | None = None
    window_kind: str = "bump"
    window_oversample: int = 8
    balls: tuple | None = None  # (center, radius, amplitude) triples; None: default layout
    smoothing: float | None = None
    trunc: int | None = None
    iterations: int = 2
    faces: tuple | None = None
    six_face: bool = False
    freq_oversample: int = 8
    backend: str = "fast"
    nufft_tol: float = 1e-6
    early_stop: bool = False
    noise_level: float = 0.0
    noise_seed: int = 0
    lines: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._check("dim", self.dim in (2, 3), "dim must be 2 or 3")
        self._check("n_nodes", self.n_nodes >= 3, "n_nodes must be >= 3")
        self._check("noise_level", self.noise_level >= 0, "noise level must be nonnegative")
        if self.faces is not None:
            for tag in self.faces:
                try:
                    check_face(tag, self.dim)
                except ValueError as exc:
                    raise self._error("faces", str(exc)) from None
        if self.balls is not None:
            for center, _, _ in self.balls:
                self._check("balls", len(center) == self.dim, f"ball center {center} is not {self.dim}D")
        self.grid()

    def _error(self, name, msg):
        line = self.lines.get(name)
        return ConfigError(f"line {line}: {msg}" if line else msg)

    def _check(self, name, ok, msg):
        if not ok:
            raise self._error(name, msg)

    def grid(self):
        """Grid from any two of dt, n_time, T (dt defaults to the spatial step)."""
        h = 1.0 / (self.n_nodes - 1)
        dt, n_time, T = self.dt, self.n_time, self.T
        where = "T" if T is not None else ("n_time" if n_time is not None else "dt")
        try:
            if dt is not None and n_time is not None:
                grid = Grid(self.dim, self.n_nodes, dt, n_time)
                if T is not None and not math.isclose(grid.T, T, rel_tol=1e-9):
                    raise ValueError(f"T={T} disagrees with dt*(n_time-1)={grid.T}")
                return grid
            if n_time is not None:
                if T is None:
                    return Grid(self.dim, self.n_nodes, h, n_time)
                if n_time < 2:
                    raise ValueError(f"n_time must be >= 2, got {n_time}")
                return Grid(self.dim, self.n_nodes, T / (n_time - 1), n_time)
            return Grid.from_T(self.dim, self.n_nodes, 2.0 if T is None else T, dt)
        except ValueError as exc:
            raise self._error(where, str(exc)) from None

    def ball_specs(self):
        if self.balls is None:
            base = default_balls(self.dim)
            return [replace(b, smoothing=self.smoothing) for b in base]
        return [BallSpec(tuple(c), r, a, self.smoothing) for c, r, a in self.balls]

    def recon_config(self, grid=None):
        try:
            return ReconConfig(
                self.grid() if grid is None else grid,
                trunc=self.trunc,
                iterations=self.iterations,
                faces=self.faces,
                window_kind=self.window_kind,
                window_oversample=self.window_oversample,
                freq_oversample=self.freq_oversample,
                backend=self.backend,
                six_face=self.six_face,
                nufft_tol=self.nufft_tol,
                early_stop=self.early_stop,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def override(self, **kwargs):
        """Copy with the non-None keyword values replacing the file values."""
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        names = {f.name for f in fields(self)}
        unknown = set(kwargs) - names
        if unknown:
            raise ConfigError(f"unknown settings: {', '.join(sorted(unknown))}")
        lines = {k: v for k, v in self.lines.items() if k not in kwargs}
        return replace(self, lines=lines, **kwargs)


def _parse_balls(rows, dim_hint):
    balls = []
    for lineno, row in rows:
        if not row:
            continue
        try:
            nums = [float(x) for x in row.split()]
        except ValueError:
            raise ConfigError(f"line {lineno}: ball entry is not numeric: {row!r}") from None
        if len(nums) not in (4, 5) or (dim_hint and len(nums) != dim_hint + 2):
            raise ConfigError(f"line {lineno}: ball needs center, radius, amplitude: {row!r}")
        try:
            BallSpec(tuple(nums[:-2]), nums[-2], nums[-1])
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        balls.append((tuple(nums[:-2]), nums[-2], nums[-1]))
    if not balls:
        raise ConfigError(f"line {rows[0][0]}: empty ball list")
    return tuple(balls)


def parse_config(text):
    """Parse configuration text into a RunConfig."""
    entries = {}  # field -> (rows of (line number, text), key)
    section = None
    last = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if raw[0] in " \t" and last is not None:
            last.append((lineno, line.strip()))
            continue
        line = line.strip()
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {line!r}")
            section = line[1:-1].strip().lower()
            if section not in {s for s, _ in _KEYS}:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            last = None
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if section is None:
            raise ConfigError(f"line {lineno}: setting outside any section")
        key, value = (s.strip() for s in line.split("=", 1))
        spec = _KEYS.get((section, key.lower()))
        if spec is None:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [{section}]")
        if spec[0] in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        last = [(lineno, value)]
        entries[spec[0]] = (last, key)
    kwargs, lines = {}, {}
    converters = dict(_KEYS.values())
    for name, (rows, key) in entries.items():
        lineno = lines[name] = rows[0][0]
        if name == "balls":
            continue
        value = " ".join(text for _, text in rows if text)
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        try:
            kwargs[name] = converters[name](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    if "balls" in entries:
        kwargs["balls"] = _parse_balls(entries["balls"][0], kwargs.get("dim"))
    return RunConfig(lines=lines, **kwargs)


def load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())
