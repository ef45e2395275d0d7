"""Error norms and line profiles for comparing reconstructions with ground truth."""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_volume


def trapezoid_weights(n_nodes, dim):
    w1 = np.full(n_nodes, 1.0 / (n_nodes - 1))
    w1[0] = w1[-1] = 0.5 / (n_nodes - 1)
    w = w1
    for _ in range(dim - 1):
        w = np.multiply.outer(w, w1)
    return w


def l2_norm(f):
    f = np.asarray(f, dtype=float)
    return float(np.sqrt(np.sum(trapezoid_weights(f.shape[0], f.ndim) * f * f)))


def rel_error(f_hat, f_true, norm="l2"):
    """Relative error ``|f_hat - f_true| / |f_true|`` in the trapezoid L2 or max norm."""
    f_hat = check_volume(f_hat)
    f_true = check_volume(f_true)
    if f_hat.shape != f_true.shape:
        raise ValueError(f"shape mismatch {f_hat.shape} vs {f_true.shape}")
    if norm == "l2":
        num, den = l2_norm(f_hat - f_true), l2_norm(f_true)
    elif norm == "linf":
        num, den = float(np.max(np.abs(f_hat - f_true))), float(np.max(np.abs(f_true)))
    else:
        raise ValueError(f"norm must be 'l2' or 'linf', got {norm!r}")
    if den == 0:
        raise ZeroDivisionError("reference field is identically zero")
    return num / den


@dataclass
class ErrorReport:
    rel_l2: float
    rel_linf: float
    per_iterate: list = field(default_factory=list)

    @classmethod
    def from_iterates(cls, iterates, f_true):
        rows = [(rel_error(f, f_true, "l2"), rel_error(f, f_true, "linf")) for f in iterates]
        return cls(rows[-1][0], rows[-1][1], rows)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("iterate,rel_l2,rel_linf\n")
            for k, (a, b) in enumerate(self.per_iterate or [(self.rel_l2, self.rel_linf)]):
                fh.write(f"{k},{a:.17g},{b:.17g}\n")


def line_profile(f, axis=0, at=None):
    """Values of `f` along the grid line parallel to `axis` through the fixed coordinates `at`.

    `at` lists the other coordinates in increasing axis order (default 0.25 each).
    Returns an ``(n_nodes, 2)`` array of (coordinate, value).
    """
    f = check_volume(f)
    n, dim = f.shape[0], f.ndim
    if not 0 <= axis < dim:
        raise ValueError(f"axis {axis} out of range for {dim}D")
    at = [0.25] * (dim - 1) if at is None else list(at)
    if len(at) != dim - 1:
        raise ValueError(f"need {dim - 1} fixed coordinates, got {len(at)}")
    index = []
    for c in at:
        pos = c * (n - 1)
        j = int(round(pos))
        if abs(pos - j) > 1e-9 or not 0 <= j < n:
            raise ValueError(f"coordinate {c} is not a grid node")
        index.append(j)
    index.insert(axis, slice(None))
    x = np.linspace(0.0, 1.0, n)
    return np.column_stack([x, f[tuple(index)]])
