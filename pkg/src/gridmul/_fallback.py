"""Pure numpy versions of the compiled kernels.

Each loop below walks the summation index in ascending order and lets
numpy vectorise over the independent outputs only, which reproduces the
compiled kernels bit for bit.
"""

import numpy as np


def gemm(a, b):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.float64)
    tmp = np.empty((n, m), dtype=np.float64)
    for l in range(k):
        np.multiply(a[:, l, None], b[l, None, :], out=tmp)
        out += tmp
    return out


def row_checks(x):
    r, c = x.shape
    plain = np.zeros(r, dtype=np.float64)
    weighted = np.zeros(r, dtype=np.float64)
    for j in range(c):
        col = x[:, j]
        plain += col
        weighted += float(j + 1) * col
    return plain, weighted


def col_checks(x):
    r, c = x.shape
    plain = np.zeros(c, dtype=np.float64)
    weighted = np.zeros(c, dtype=np.float64)
    for i in range(r):
        row = x[i]
        plain += row
        weighted += float(i + 1) * row
    return plain, weighted
