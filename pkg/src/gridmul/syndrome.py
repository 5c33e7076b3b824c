"""Detection: per-line residuals against the threshold delta."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .encoding import GridCodedProduct, GridCodeSpec
from .matrix import ShapeError


@dataclass(frozen=True)
class Syndrome:
    """Line residuals of a coded product and the lines they flag.

    A line is flagged when its plain residual exceeds ``delta`` or its
    weighted residual exceeds ``delta * weighted_delta_scale`` (strict).
    """

    row_plain: np.ndarray
    row_weighted: np.ndarray
    col_plain: np.ndarray
    col_weighted: np.ndarray
    global_: np.ndarray
    flagged_rows: tuple[int, ...]
    flagged_cols: tuple[int, ...]
    delta: float
    weighted_delta_scale: float = 1.0

    @property
    def global_flagged(self) -> bool:
        return bool(np.any(np.abs(self.global_) > self.delta))

    @property
    def is_clean(self) -> bool:
        return not self.flagged_rows and not self.flagged_cols and not self.global_flagged

    def dump(self) -> str:
        """Line-oriented text dump, one ``ROW``/``COL`` record per data line."""
        lines = []
        rows = set(self.flagged_rows)
        cols = set(self.flagged_cols)
        for i, (p, w) in enumerate(zip(self.row_plain, self.row_weighted)):
            lines.append(f"ROW {i} plain={p:.6g} weighted={w:.6g} flagged={int(i in rows)}")
        for j, (p, w) in enumerate(zip(self.col_plain, self.col_weighted)):
            lines.append(f"COL {j} plain={p:.6g} weighted={w:.6g} flagged={int(j in cols)}")
        return "\n".join(lines) + "\n"


def compute_syndrome(
    c_bar: GridCodedProduct, spec: GridCodeSpec, delta: float, weighted_delta_scale: float = 1.0
) -> Syndrome:
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    if (c_bar.n, c_bar.m) != (spec.n, spec.m):
        raise ShapeError("coded product does not match spec dimensions")
    r = c_bar.residuals
    m = spec.m
    col_plain = r.col_plain[:m]
    col_weighted = r.col_weighted[:m]
    wdelta = delta * weighted_delta_scale
    rows = np.flatnonzero((np.abs(r.row_plain) > delta) | (np.abs(r.row_weighted) > wdelta))
    cols = np.flatnonzero((np.abs(col_plain) > delta) | (np.abs(col_weighted) > wdelta))
    return Syndrome(
        row_plain=r.row_plain,
        row_weighted=r.row_weighted,
        col_plain=col_plain,
        col_weighted=col_weighted,
        global_=r.global_,
        flagged_rows=tuple(int(i) for i in rows),
        flagged_cols=tuple(int(j) for j in cols),
        delta=float(delta),
        weighted_delta_scale=float(weighted_delta_scale),
    )


class PatternKind(enum.Enum):
    CLEAN = "clean"
    PARITY_REGION = "parity-region"
    CORRECTABLE = "correctable"
    UNCORRECTABLE = "uncorrectable"


@dataclass(frozen=True)
class PatternClass:
    kind: PatternKind
    rows: tuple[int, ...] = ()
    cols: tuple[int, ...] = ()


def classify_pattern(s: Syndrome) -> PatternClass:
    """Route a syndrome to a correction strategy.

    Rows flagged without columns (or the reverse), or only the global
    parities tripping, can only come from a corrupted parity symbol and are
    sent to parity repair.
    """
    rows, cols = s.flagged_rows, s.flagged_cols
    if not rows and not cols:
        kind = PatternKind.PARITY_REGION if s.global_flagged else PatternKind.CLEAN
    elif not rows or not cols:
        kind = PatternKind.PARITY_REGION
    elif min(len(rows), len(cols)) >= 3:
        kind = PatternKind.UNCORRECTABLE
    else:
        kind = PatternKind.CORRECTABLE
    return PatternClass(kind, rows, cols)
