# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-order kernels.

Every accumulator is updated in ascending index order, so results are
bit-identical to the numpy fallback in ``_fallback`` and to a naive
triple loop. Build with ``-ffp-contract=off``; fused multiply-add would
change the rounding.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def gemm(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = b.shape[1]
    cdef Py_ssize_t i, l, j
    cdef double ail
    out = np.zeros((n, m), dtype=np.float64)
    cdef double[:, ::1] c = out
    with nogil:
        for i in range(n):
            for l in range(k):
                ail = a[i, l]
                for j in range(m):
                    c[i, j] += ail * b[l, j]
    return out


def row_checks(const double[:, ::1] x):
    """Plain and weighted (1..cols) sums of every row."""
    cdef Py_ssize_t r = x.shape[0], c = x.shape[1], i, j
    cdef double p, w, v
    plain = np.empty(r, dtype=np.float64)
    weighted = np.empty(r, dtype=np.float64)
    cdef double[::1] pv = plain, wv = weighted
    with nogil:
        for i in range(r):
            p = 0.0
            w = 0.0
            for j in range(c):
                v = x[i, j]
                p += v
                w += <double>(j + 1) * v
            pv[i] = p
            wv[i] = w
    return plain, weighted


def col_checks(const double[:, ::1] x):
    """Plain and weighted (1..rows) sums of every column."""
    cdef Py_ssize_t r = x.shape[0], c = x.shape[1], i, j
    cdef double wi, v
    plain = np.zeros(c, dtype=np.float64)
    weighted = np.zeros(c, dtype=np.float64)
    cdef double[::1] pv = plain, wv = weighted
    with nogil:
        for i in range(r):
            wi = <double>(i + 1)
            for j in range(c):
                v = x[i, j]
                pv[j] += v
                wv[j] += wi * v
    return plain, weighted
