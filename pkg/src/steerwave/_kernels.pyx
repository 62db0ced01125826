# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled generalized-Legendre kernels.

Same signatures and results as :mod:`steerwave._kernels_py`.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def legendre_table(int d, int lmax, const double[::1] x):
    """Return P_l(d; x) for l = 0..lmax as an array of shape (lmax + 1, len(x))."""
    cdef Py_ssize_t n = x.shape[0], i
    cdef int l
    cdef double xi, p0, p1, p2
    out = np.empty((lmax + 1, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            xi = x[i]
            p0 = 1.0
            o[0, i] = p0
            if lmax == 0:
                continue
            p1 = xi
            o[1, i] = p1
            for l in range(1, lmax):
                p2 = ((2 * l + d - 2) * xi * p1 - l * p0) / (l + d - 2)
                o[l + 1, i] = p2
                p0 = p1
                p1 = p2
    return out


def legendre_sum(int d, const double[::1] weights, const double[::1] x):
    """Return sum_l weights[l] * P_l(d; x) without materializing the table."""
    cdef Py_ssize_t n = x.shape[0], i
    cdef int l, lmax = weights.shape[0] - 1
    cdef double xi, p0, p1, p2, acc
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            xi = x[i]
            p0 = 1.0
            acc = weights[0]
            if lmax >= 1:
                p1 = xi
                acc = acc + weights[1] * p1
                for l in range(1, lmax):
                    p2 = ((2 * l + d - 2) * xi * p1 - l * p0) / (l + d - 2)
                    acc = acc + weights[l + 1] * p2
                    p0 = p1
                    p1 = p2
            o[i] = acc
    return out
