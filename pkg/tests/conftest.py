import numpy as np
import pytest

from gridmul import GridCodeSpec, encode_product, random_matrix


def naive_matmul(a, b):
    """Triple loop, inner index ascending, plain Python floats."""
    n, k = len(a), len(a[0])
    m = len(b[0])
    out = [[0.0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = 0.0
            for l in range(k):
                s += float(a[i][l]) * float(b[l][j])
            out[i][j] = s
    return np.array(out)


def generator_left(n):
    return np.vstack([np.eye(n), np.ones(n), np.arange(1, n + 1)])


def generator_right(m):
    return np.hstack([np.eye(m), np.ones((m, 1)), np.arange(1, m + 1)[:, None]])


def brute_residuals(full, n, m):
    """Line residuals by explicit loops, independent of the kernels."""
    f = [[float(v) for v in row] for row in full]
    rp = [sum(f[i][j] for j in range(m)) - f[i][m] for i in range(n)]
    rw = [sum((j + 1) * f[i][j] for j in range(m)) - f[i][m + 1] for i in range(n)]
    cp = [sum(f[i][j] for i in range(n)) - f[n][j] for j in range(m)]
    cw = [sum((i + 1) * f[i][j] for i in range(n)) - f[n + 1][j] for j in range(m)]
    return np.array(rp), np.array(rw), np.array(cp), np.array(cw)


@pytest.fixture
def coded8():
    spec = GridCodeSpec(8, 8, 8)
    a = random_matrix(8, 8, 11)
    b = random_matrix(8, 8, 12)
    return spec, a, b, encode_product(a, b, spec)
