"""Pure numpy fallback for the generalized-Legendre kernels."""

import numpy as np


def legendre_table(d, lmax, x):
    """Return P_l(d; x) for l = 0..lmax as an array of shape (lmax + 1, len(x))."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((lmax + 1, x.shape[0]))
    out[0] = 1.0
    if lmax >= 1:
        out[1] = x
    for l in range(1, lmax):
        out[l + 1] = ((2 * l + d - 2) * x * out[l] - l * out[l - 1]) / (l + d - 2)
    return out


def legendre_sum(d, weights, x):
    """Return sum_l weights[l] * P_l(d; x) without materializing the table."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    lmax = weights.shape[0] - 1
    p0 = np.ones_like(x)
    acc = weights[0] * p0
    if lmax >= 1:
        p1 = x.copy()
        acc += weights[1] * p1
        for l in range(1, lmax):
            p2 = ((2 * l + d - 2) * x * p1 - l * p0) / (l + d - 2)
            acc += weights[l + 1] * p2
            p0, p1 = p1, p2
    return acc
