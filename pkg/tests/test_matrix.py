import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gridmul import matrix
from gridmul.matrix import ShapeError, multiply, random_matrix

from conftest import naive_matmul


def test_identity():
    m = random_matrix(3, 3, 5)
    assert np.array_equal(multiply(np.eye(3), m), m)


def test_small_product():
    assert multiply([[1, 2], [3, 4]], [[5, 6], [7, 8]]).tolist() == [[19, 22], [43, 50]]


def test_zero_product():
    m = random_matrix(3, 4, 1)
    assert not multiply(np.zeros((2, 3)), m).any()


def test_dimension_mismatch_names_shapes():
    with pytest.raises(ShapeError, match="2x3 by 2x2"):
        multiply(np.zeros((2, 3)), np.zeros((2, 2)))


@pytest.mark.parametrize("bad", [np.array([1.0, 2.0]), np.zeros((0, 3)), np.array([[1.0, np.nan]])])
def test_invalid_matrices(bad):
    with pytest.raises(ValueError):
        matrix.as_matrix(bad)


def test_random_matrix_deterministic_and_bounded():
    assert np.array_equal(random_matrix(2, 2, 7), random_matrix(2, 2, 7))
    r = random_matrix(100, 100, 1)
    assert r.min() >= -1 and r.max() <= 1
    assert not np.array_equal(random_matrix(4, 4, 1), random_matrix(4, 4, 2))


def test_derive_seed_distinct():
    seeds = {matrix.derive_seed(0, d, s, t) for d in range(3) for s in range(6) for t in range(50)}
    assert len(seeds) == 900
    assert matrix.derive_seed(3, 1, 2) == matrix.derive_seed(3, 1, 2)


dims = st.integers(1, 16)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_matches_naive_oracle_bitwise(data):
    n, k, m = data.draw(dims), data.draw(dims), data.draw(dims)
    seed = data.draw(st.integers(0, 2**32))
    a = random_matrix(n, k, seed) * 10
    b = random_matrix(k, m, seed + 1) * 10
    assert np.array_equal(multiply(a, b), naive_matmul(a, b))


elems = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (5, 4), elements=elems), arrays(np.float64, (4, 6), elements=elems),
       arrays(np.float64, (4, 6), elements=elems))
def test_bilinear(a, b, b2):
    lhs = multiply(a, b + b2)
    rhs = multiply(a, b) + multiply(a, b2)
    # entries up to 4 * 1e3 * 2e3; rounding scales with that magnitude
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max() * np.abs(b + b2).max() * 4))


def test_bilinear_unit_scale():
    a = random_matrix(6, 5, 1)
    b = random_matrix(5, 7, 2)
    b2 = random_matrix(5, 7, 3)
    assert np.abs(multiply(a, b + b2) - multiply(a, b) - multiply(a, b2)).max() <= 1e-12


def test_binary_round_trip_bit_exact(tmp_path):
    x = random_matrix(5, 3, 9) * 1e300
    x[0, 0] = -0.0
    buf = matrix.to_bytes(x)
    assert len(buf) == 8 + 15 * 8
    assert buf[:8] == (5).to_bytes(4, "little") + (3).to_bytes(4, "little")
    y = matrix.from_bytes(buf)
    assert y.tobytes() == x.tobytes()
    matrix.save_binary(tmp_path / "x.bin", x)
    assert matrix.load_binary(tmp_path / "x.bin").tobytes() == x.tobytes()


def test_binary_rejects_truncated():
    buf = matrix.to_bytes(np.ones((2, 2)))
    with pytest.raises(ValueError):
        matrix.from_bytes(buf[:-1])


def test_csv_round_trip(tmp_path):
    x = random_matrix(4, 3, 2)
    text = matrix.to_csv(x)
    assert len(text.splitlines()) == 4 and "," in text
    assert np.array_equal(matrix.from_csv(text), x)
    matrix.save_csv(tmp_path / "x.csv", x)
    assert np.array_equal(matrix.load_csv(tmp_path / "x.csv"), x)


def test_tau_struct_formula():
    assert matrix.tau_struct(64, 128, 64, 1.0, 1.0) == 64 * 2.0**-53 * 128 * 64**2
