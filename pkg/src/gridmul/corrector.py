"""Correction of flagged error patterns.

A pattern whose flagged lines fit in at most two rows (or two columns) is
solved line by line from the perpendicular checks: with one flagged row
every flagged column's plain residual *is* the error; with two flagged
rows each column gives the 2x2 system::

    [ 1   1  ] [e1]   [plain residual   ]
    [ w1  w2 ] [e2] = [weighted residual]

where ``w = row + 1``. Three or more lines on both sides are refused.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .encoding import GridCodedProduct, GridCodeSpec
from .matrix import col_checks, row_checks
from .syndrome import PatternKind, Syndrome, classify_pattern, compute_syndrome


class OutcomeKind(enum.Enum):
    CLEAN = "clean"
    CORRECTED = "corrected"
    PARITY_REPAIR = "parity-repair"
    UNCORRECTABLE = "uncorrectable"


class Repair(NamedTuple):
    row: int
    col: int
    old: float
    new: float
    e_hat: float


@dataclass(frozen=True)
class CorrectionOutcome:
    kind: OutcomeKind
    corrected: GridCodedProduct | None = None
    repairs: list[Repair] = field(default_factory=list)
    reason: str | None = None

    def repairs_csv(self) -> str:
        lines = ["row,col,old,new,e_hat"]
        lines += [f"{r.row},{r.col},{r.old!r},{r.new!r},{r.e_hat!r}" for r in self.repairs]
        return "\n".join(lines) + "\n"


class SingularSystemError(RuntimeError):
    """Raised if a 2x2 location system is singular (distinct lines never are)."""


def _solve_pair(w1: float, w2: float, plain: float, weighted: float) -> tuple[float, float]:
    det = w2 - w1
    if det == 0:
        raise SingularSystemError(f"singular 2x2 system for weights {w1}, {w2}")
    e2 = (weighted - w1 * plain) / det
    return plain - e2, e2


def repair_single_row(c_bar: GridCodedProduct, row: int, flagged_cols, s: Syndrome) -> list[Repair]:
    """Subtract each flagged column's plain residual from ``(row, col)``."""
    out = []
    for t in flagged_cols:
        e = float(s.col_plain[t])
        if e == 0.0:
            continue
        old = float(c_bar.full[row, t])
        out.append(Repair(row, t, old, old - e, e))
    return out


def repair_two_rows(c_bar: GridCodedProduct, rows, flagged_cols, s: Syndrome) -> list[Repair]:
    s1, s2 = rows
    out = []
    for t in flagged_cols:
        e1, e2 = _solve_pair(s1 + 1.0, s2 + 1.0, float(s.col_plain[t]), float(s.col_weighted[t]))
        for r, e in ((s1, e1), (s2, e2)):
            if e != 0.0:
                old = float(c_bar.full[r, t])
                out.append(Repair(r, t, old, old - e, e))
    return out


def repair_single_col(c_bar: GridCodedProduct, col: int, flagged_rows, s: Syndrome) -> list[Repair]:
    out = []
    for i in flagged_rows:
        e = float(s.row_plain[i])
        if e == 0.0:
            continue
        old = float(c_bar.full[i, col])
        out.append(Repair(i, col, old, old - e, e))
    return out


def repair_two_cols(c_bar: GridCodedProduct, cols, flagged_rows, s: Syndrome) -> list[Repair]:
    t1, t2 = cols
    out = []
    for i in flagged_rows:
        e1, e2 = _solve_pair(t1 + 1.0, t2 + 1.0, float(s.row_plain[i]), float(s.row_weighted[i]))
        for c, e in ((t1, e1), (t2, e2)):
            if e != 0.0:
                old = float(c_bar.full[i, c])
                out.append(Repair(i, c, old, old - e, e))
    return out


def repair_parity(c_bar: GridCodedProduct, rows, cols, delta: float) -> list[Repair]:
    """Recompute the parity symbols of the implicated lines from the data block.

    Global corners are recomputed afterwards if their constraint still
    trips at ``delta``.
    """
    n, m = c_bar.n, c_bar.m
    data = c_bar.data
    updates: dict[tuple[int, int], float] = {}
    if rows:
        rp, rw = row_checks(data[list(rows)])
        for i, p, w in zip(rows, rp, rw):
            updates[(i, m)] = float(p)
            updates[(i, m + 1)] = float(w)
    if cols:
        cp, cw = col_checks(data[:, list(cols)])
        for j, p, w in zip(cols, cp, cw):
            updates[(n, j)] = float(p)
            updates[(n + 1, j)] = float(w)
    staged = c_bar.replace(updates) if updates else c_bar
    glob = staged.residuals.global_
    if np.any(np.abs(glob) > delta):
        cp, cw = col_checks(data)
        gp, gw = row_checks(np.stack([cp, cw]))
        fresh = ((gp[0], gw[0]), (gp[1], gw[1]))
        for a in (0, 1):
            for b in (0, 1):
                if abs(glob[a, b]) > delta:
                    updates[(n + a, m + b)] = float(fresh[a][b])
    return [
        Repair(i, j, float(c_bar.full[i, j]), v, float(c_bar.full[i, j]) - v)
        for (i, j), v in sorted(updates.items())
    ]


def _swept(flagged, plain, weighted, tol):
    if tol is None:
        return list(flagged)
    extra = np.flatnonzero((np.abs(plain) > tol) | (np.abs(weighted) > tol))
    return sorted(set(flagged).union(int(x) for x in extra))


def correct(
    c_bar: GridCodedProduct, s: Syndrome, spec: GridCodeSpec, sweep_tol: float | None = None
) -> CorrectionOutcome:
    """Detect-and-correct dispatch for one coded product.

    ``sweep_tol``: once the faulty rows (or columns) are localized, also
    repair perpendicular lines whose residual exceeds this tolerance even
    if it is below ``delta``. Errors spread by a corrupted input symbol can
    be arbitrarily small in some lines; sweeping removes them instead of
    leaving them below the detection threshold. ``None`` repairs flagged
    lines only.
    """
    pc = classify_pattern(s)
    if pc.kind is PatternKind.CLEAN:
        return CorrectionOutcome(OutcomeKind.CLEAN, c_bar)
    if pc.kind is PatternKind.UNCORRECTABLE:
        return CorrectionOutcome(
            OutcomeKind.UNCORRECTABLE,
            reason=f"{len(pc.rows)} rows and {len(pc.cols)} columns flagged; recompute required",
        )

    if pc.kind is PatternKind.PARITY_REGION:
        repairs = repair_parity(c_bar, pc.rows, pc.cols, s.delta)
        kind = OutcomeKind.PARITY_REPAIR
    elif len(pc.rows) <= len(pc.cols):
        cols = _swept(pc.cols, s.col_plain, s.col_weighted, sweep_tol)
        if len(pc.rows) == 1:
            repairs = repair_single_row(c_bar, pc.rows[0], cols, s)
        else:
            repairs = repair_two_rows(c_bar, pc.rows, cols, s)
        kind = OutcomeKind.CORRECTED
    else:
        rows = _swept(pc.rows, s.row_plain, s.row_weighted, sweep_tol)
        if len(pc.cols) == 1:
            repairs = repair_single_col(c_bar, pc.cols[0], rows, s)
        else:
            repairs = repair_two_cols(c_bar, pc.cols, rows, s)
        kind = OutcomeKind.CORRECTED

    fixed = c_bar.replace({(r.row, r.col): r.new for r in repairs})
    post = compute_syndrome(fixed, spec, s.delta, s.weighted_delta_scale)
    if not post.is_clean:
        return CorrectionOutcome(OutcomeKind.UNCORRECTABLE, repairs=repairs, reason="post-check failed")
    return CorrectionOutcome(kind, fixed, repairs)


def detect_and_correct(
    c_bar: GridCodedProduct, spec: GridCodeSpec, delta: float, *, weighted_delta_scale: float = 1.0, sweep_tol=None
) -> CorrectionOutcome:
    s = compute_syndrome(c_bar, spec, delta, weighted_delta_scale)
    return correct(c_bar, s, spec, sweep_tol)
