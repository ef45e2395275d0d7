import numpy as np


def lagrange4(values, pos, index):
    """Four-point (cubic) Lagrange interpolation on a uniform table.

    `values` is either a 1D table or a stack of tables ``(batch, n)`` paired with
    ``pos`` of shape ``(batch, p)``. `pos` holds fractional node positions and
    `index` maps integer node numbers (possibly outside the stored range) onto
    stored indices, which is where the table's symmetries live.
    """
    pos = np.asarray(pos, dtype=float)
    i0 = np.floor(pos).astype(np.int64)
    u = pos - i0
    weights = (
        -u * (u - 1.0) * (u - 2.0) / 6.0,
        (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
        -(u + 1.0) * u * (u - 2.0) / 2.0,
        (u + 1.0) * u * (u - 1.0) / 6.0,
    )
    out = np.zeros(pos.shape)
    for off, w in zip((-1, 0, 1, 2), weights):
        idx = index(i0 + off)
        if values.ndim == 1:
            out += w * values[idx]
        else:
            out += w * np.take_along_axis(values, idx, axis=-1)
    return out
