"""Single-checksum ABFT baseline.

One plain parity row and one plain parity column. A single flagged
row/column cross is repaired algebraically. When the clean operands are
supplied, a single flagged row crossing several flagged columns (the
footprint of a corrupted A symbol) is recomputed from A and B, and
likewise a single flagged column (corrupted B symbol). If only columns
(or only rows) are flagged the faulty line cannot be located and the
whole product is recomputed. Two or more flagged lines on both sides are
refused.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corrector import CorrectionOutcome, OutcomeKind, Repair
from .matrix import ShapeError, as_matrix, col_checks, multiply, row_checks


@dataclass(frozen=True)
class ChecksumCodedProduct:
    full: np.ndarray
    n: int
    m: int

    def __post_init__(self):
        full = as_matrix(self.full, name="checksum product")
        if full.shape != (self.n + 1, self.m + 1):
            raise ShapeError(f"checksum product must be {self.n + 1}x{self.m + 1}, got {full.shape}")
        if full is self.full:
            full = full.copy()
        full.setflags(write=False)
        object.__setattr__(self, "full", full)

    @property
    def data(self) -> np.ndarray:
        return self.full[: self.n, : self.m]

    def residuals(self) -> tuple[np.ndarray, np.ndarray]:
        """(row residuals, column residuals), each ``sum - parity``."""
        rows, _ = row_checks(self.full[: self.n, : self.m])
        cols, _ = col_checks(self.full[: self.n, : self.m])
        return rows - self.full[: self.n, self.m], cols - self.full[self.n, : self.m]

    def with_data(self, data) -> "ChecksumCodedProduct":
        full = self.full.copy()
        full[: self.n, : self.m] = data
        return ChecksumCodedProduct(full, self.n, self.m)


def _encode(a, b):
    a_bar = np.vstack([a, col_checks(a)[0]])
    b_bar = np.ascontiguousarray(np.column_stack([b, row_checks(b)[0]]))
    return a_bar, b_bar


def checksum_multiply(a, b) -> ChecksumCodedProduct:
    a = as_matrix(a, name="A")
    b = as_matrix(b, name="B")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    a_bar, b_bar = _encode(a, b)
    return ChecksumCodedProduct(multiply(a_bar, b_bar), a.shape[0], b.shape[1])


def _flags(p: ChecksumCodedProduct, delta: float):
    rr, cr = p.residuals()
    return rr, cr, np.flatnonzero(np.abs(rr) > delta), np.flatnonzero(np.abs(cr) > delta)


def checksum_detect_correct(p: ChecksumCodedProduct, delta: float, a=None, b=None) -> CorrectionOutcome:
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    rr, _, rows, cols = _flags(p, delta)
    if len(rows) == 0 and len(cols) == 0:
        return CorrectionOutcome(OutcomeKind.CLEAN, p)

    full = p.full.copy()
    repairs = []
    if len(rows) == 1 and len(cols) == 1:
        i, j = int(rows[0]), int(cols[0])
        e = float(rr[i])
        full[i, j] -= e
        repairs.append(Repair(i, j, float(p.full[i, j]), float(full[i, j]), e))
    elif a is not None and b is not None and (len(rows) == 1) != (len(cols) == 1):
        # recompute-on-detect for the single flagged line
        a_bar, b_bar = _encode(as_matrix(a), as_matrix(b))
        if len(rows) == 1:
            i = int(rows[0])
            fresh = multiply(a_bar[i : i + 1], b_bar)[0]
            cells = [(i, j) for j in range(p.m + 1)]
        else:
            j = int(cols[0])
            fresh = multiply(a_bar, b_bar[:, j : j + 1])[:, 0]
            cells = [(i, j) for i in range(p.n + 1)]
        for (i, j), v in zip(cells, fresh):
            if full[i, j] != v:
                repairs.append(Repair(i, j, float(full[i, j]), float(v), float(full[i, j] - v)))
                full[i, j] = v
    elif a is not None and b is not None and (len(rows) == 0) != (len(cols) == 0):
        # one line family flagged but the crossing line cancelled below delta:
        # the fault cannot be localized, so the whole product is recomputed
        a_bar, b_bar = _encode(as_matrix(a), as_matrix(b))
        fresh = multiply(a_bar, b_bar)
        for i, j in np.argwhere(fresh != full):
            repairs.append(Repair(int(i), int(j), float(full[i, j]), float(fresh[i, j]), float(full[i, j] - fresh[i, j])))
        full = fresh
    else:
        return CorrectionOutcome(
            OutcomeKind.UNCORRECTABLE, reason=f"{len(rows)} rows and {len(cols)} columns flagged"
        )

    fixed = ChecksumCodedProduct(full, p.n, p.m)
    _, _, r2, c2 = _flags(fixed, delta)
    if len(r2) or len(c2):
        return CorrectionOutcome(OutcomeKind.UNCORRECTABLE, repairs=repairs, reason="post-check failed")
    return CorrectionOutcome(OutcomeKind.CORRECTED, fixed, repairs)
