"""Grid-like checksum encoding of a matrix product.

The left operand gains two parity rows (plain column sums and sums weighted
by row number 1..n), the right operand two parity columns (plain row sums
and sums weighted by column number 1..m). Their product is the
``(n+2) x (m+2)`` coded matrix::

    [ C    P_r ]      C    data block          n x m
    [ P_c  P_g ]      P_r  row parities        n x 2
                      P_c  column parities     2 x m
                      P_g  global parities     2 x 2

Indices are 0-based throughout; the weight of line ``i`` is ``i + 1``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .matrix import ShapeError, as_matrix, col_checks, from_bytes, multiply, row_checks, tau_struct, to_bytes


@dataclass(frozen=True)
class GridCodeSpec:
    """Problem dimensions plus the checksum / weighted-checksum vectors.

    ``n, m >= 3`` is needed for three-line patterns to exist; smaller sizes
    are accepted for unit-scale examples.
    """

    n: int
    k: int
    m: int

    def __post_init__(self):
        if min(self.n, self.k, self.m) < 1:
            raise ShapeError(f"dimensions must be positive, got n={self.n} k={self.k} m={self.m}")

    @classmethod
    def for_operands(cls, a, b) -> "GridCodeSpec":
        a = np.asarray(a)
        b = np.asarray(b)
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
            raise ShapeError(f"incompatible operands {a.shape} and {b.shape}")
        return cls(a.shape[0], a.shape[1], b.shape[1])

    @property
    def row_check_plain(self) -> np.ndarray:
        return np.ones(self.n)

    @property
    def row_check_weighted(self) -> np.ndarray:
        return np.arange(1, self.n + 1, dtype=np.float64)

    @property
    def col_check_plain(self) -> np.ndarray:
        return np.ones(self.m)

    @property
    def col_check_weighted(self) -> np.ndarray:
        return np.arange(1, self.m + 1, dtype=np.float64)

    @property
    def alpha(self) -> np.ndarray:
        """Column-constraint coefficients, shape ``(2, n + 2)``."""
        out = np.zeros((2, self.n + 2))
        out[0, : self.n] = 1.0
        out[0, self.n] = -1.0
        out[1, : self.n] = self.row_check_weighted
        out[1, self.n + 1] = -1.0
        return out

    @property
    def beta(self) -> np.ndarray:
        """Row-constraint coefficients, shape ``(2, m + 2)``."""
        out = np.zeros((2, self.m + 2))
        out[0, : self.m] = 1.0
        out[0, self.m] = -1.0
        out[1, : self.m] = self.col_check_weighted
        out[1, self.m + 1] = -1.0
        return out

    @property
    def gamma(self) -> np.ndarray:
        """Global-constraint coefficients, shape ``(4, n + 2, m + 2)``.

        Ordered (plain, plain), (plain, weighted), (weighted, plain),
        (weighted, weighted) as (column check, row check).
        """
        al, be = self.alpha, self.beta
        return np.stack([np.outer(al[a], be[b]) for a in (0, 1) for b in (0, 1)])

    def tau(self, max_a: float = 1.0, max_b: float = 1.0) -> float:
        return tau_struct(self.n, self.k, self.m, max_a, max_b)


@dataclass(frozen=True)
class GridCodedProduct:
    """The coded matrix C-bar with block views.

    ``full`` is stored read-only; repairs go through :meth:`replace`.
    """

    full: np.ndarray
    n: int
    m: int

    def __post_init__(self):
        full = as_matrix(self.full, name="coded product")
        if full.shape != (self.n + 2, self.m + 2):
            raise ShapeError(f"coded product must be {self.n + 2}x{self.m + 2}, got {full.shape}")
        if full is self.full:
            full = full.copy()
        full.setflags(write=False)
        object.__setattr__(self, "full", full)

    @property
    def data(self) -> np.ndarray:
        return self.full[: self.n, : self.m]

    @property
    def parity_rows(self) -> np.ndarray:
        """The two appended rows under the data block, ``2 x m``."""
        return self.full[self.n :, : self.m]

    @property
    def parity_cols(self) -> np.ndarray:
        """The two appended columns, ``n x 2``."""
        return self.full[: self.n, self.m :]

    @property
    def global_parity(self) -> np.ndarray:
        return self.full[self.n :, self.m :]

    def replace(self, updates) -> "GridCodedProduct":
        """Copy with ``{(row, col): value}`` written into ``full``."""
        full = self.full.copy()
        for (i, j), v in updates.items():
            full[i, j] = v
        return GridCodedProduct(full, self.n, self.m)

    def with_data(self, data) -> "GridCodedProduct":
        full = self.full.copy()
        full[: self.n, : self.m] = data
        return GridCodedProduct(full, self.n, self.m)

    @cached_property
    def residuals(self) -> "ConstraintResiduals":
        return constraint_residuals(self.full, self.n, self.m)

    # full-matrix binary format followed by a (n, m) uint64 trailer
    _TRAILER = struct.Struct("<QQ")

    def to_bytes(self) -> bytes:
        return to_bytes(self.full) + self._TRAILER.pack(self.n, self.m)

    @classmethod
    def from_bytes(cls, buf: bytes) -> "GridCodedProduct":
        size = cls._TRAILER.size
        if len(buf) < size:
            raise ValueError("buffer too short for coded-product trailer")
        n, m = cls._TRAILER.unpack(buf[-size:])
        return cls(from_bytes(buf[:-size]), n, m)


@dataclass(frozen=True)
class ConstraintResiduals:
    """Residual of every grid constraint, each as ``sum - parity``.

    ``col_plain``/``col_weighted`` have length ``m + 2``: the trailing two
    entries are the column checks of the parity columns, which only feed
    the global constraints.
    """

    row_plain: np.ndarray
    row_weighted: np.ndarray
    col_plain: np.ndarray
    col_weighted: np.ndarray
    global_: np.ndarray  # (2, 2): [column check, row check]


def constraint_residuals(full: np.ndarray, n: int, m: int) -> ConstraintResiduals:
    top = full[:n]
    cp, cw = col_checks(top)
    col_plain = cp - full[n]
    col_weighted = cw - full[n + 1]
    rp, rw = row_checks(top[:, :m])
    row_plain = rp - full[:n, m]
    row_weighted = rw - full[:n, m + 1]
    # alpha^T Cbar beta, assembled from the column residuals so that large
    # data entries cancel before the weighted accumulation runs
    stacked = np.stack([col_plain[:m], col_weighted[:m]])
    gp, gw = row_checks(stacked)
    glob = np.empty((2, 2))
    glob[0, 0] = gp[0] - col_plain[m]
    glob[0, 1] = gw[0] - col_plain[m + 1]
    glob[1, 0] = gp[1] - col_weighted[m]
    glob[1, 1] = gw[1] - col_weighted[m + 1]
    return ConstraintResiduals(row_plain, row_weighted, col_plain, col_weighted, glob)


def _check_shape(x, shape, what):
    if x.shape != shape:
        raise ShapeError(f"{what} must be {shape[0]}x{shape[1]}, got {x.shape[0]}x{x.shape[1]}")


def encode_left(a, spec: GridCodeSpec) -> np.ndarray:
    """Append the plain and weighted column-sum rows below ``a``."""
    a = as_matrix(a, name="A")
    _check_shape(a, (spec.n, spec.k), "A")
    plain, weighted = col_checks(a)
    return np.vstack([a, plain, weighted])


def encode_right(b, spec: GridCodeSpec) -> np.ndarray:
    """Append the plain and weighted row-sum columns to the right of ``b``."""
    b = as_matrix(b, name="B")
    _check_shape(b, (spec.k, spec.m), "B")
    plain, weighted = row_checks(b)
    return np.ascontiguousarray(np.column_stack([b, plain, weighted]))


def coded_multiply(a_bar, b_bar, spec: GridCodeSpec) -> GridCodedProduct:
    a_bar = as_matrix(a_bar, name="encoded A")
    b_bar = as_matrix(b_bar, name="encoded B")
    _check_shape(a_bar, (spec.n + 2, spec.k), "encoded A")
    _check_shape(b_bar, (spec.k, spec.m + 2), "encoded B")
    return GridCodedProduct(multiply(a_bar, b_bar), spec.n, spec.m)


def encode_product(a, b, spec: GridCodeSpec | None = None) -> GridCodedProduct:
    """Convenience: encode both operands and multiply."""
    spec = spec or GridCodeSpec.for_operands(a, b)
    return coded_multiply(encode_left(a, spec), encode_right(b, spec), spec)


_GLOBAL_IDS = (("global_pp", "global_pw"), ("global_wp", "global_ww"))


def validate_grid_structure(c_bar: GridCodedProduct, spec: GridCodeSpec, tol: float) -> list[tuple[str, float]]:
    """Return ``(constraint_id, residual)`` for every constraint with ``|residual| > tol``.

    Ids are ``col_plain[j]``, ``col_weighted[j]``, ``row_plain[i]``,
    ``row_weighted[i]`` and ``global_xy`` where x is the column check and y
    the row check (``p`` plain, ``w`` weighted).
    """
    if (c_bar.n, c_bar.m) != (spec.n, spec.m):
        raise ShapeError("coded product does not match spec dimensions")
    r = c_bar.residuals
    out = []
    for j in range(spec.m):
        for name, vec in (("col_plain", r.col_plain), ("col_weighted", r.col_weighted)):
            if abs(vec[j]) > tol:
                out.append((f"{name}[{j}]", float(vec[j])))
    for i in range(spec.n):
        for name, vec in (("row_plain", r.row_plain), ("row_weighted", r.row_weighted)):
            if abs(vec[i]) > tol:
                out.append((f"{name}[{i}]", float(vec[i])))
    for a in (0, 1):
        for b in (0, 1):
            if abs(r.global_[a, b]) > tol:
                out.append((_GLOBAL_IDS[a][b], float(r.global_[a, b])))
    return out
