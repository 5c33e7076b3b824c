"""Constraint systems for error patterns and their numerical rank.

Unknowns are the error values at the cells of a support; every parity
symbol that sees those cells contributes one linear constraint. The
support is correctable from the parities exactly when the system has full
column rank. For three rows by three columns the 16 x 9 system always has
rank 8, so some non-zero error pattern leaves every parity untouched.

Line numbers here are 1-based because they double as the check weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class ConstraintSystem:
    matrix: np.ndarray
    rows_meta: tuple[str, ...]
    unknowns_meta: tuple[tuple[int, int], ...]


class NoDeficiencyError(ValueError):
    """The system has full column rank, so no null vector exists."""


def _strictly_increasing(x) -> bool:
    return all(p < q for p, q in zip(x, x[1:])) and x[0] >= 1


def build_e33_system(s, t) -> ConstraintSystem:
    """Constraint matrix for errors on rows ``s`` x columns ``t`` (1-based).

    Row order: for each error row its plain and weighted row checks, then
    the weighted column checks of ``t1..t3``, then their plain column
    checks, then the four global checks with coefficients 1, t, s, s*t.
    """
    s = tuple(int(x) for x in s)
    t = tuple(int(x) for x in t)
    if len(s) != 3 or len(t) != 3 or not _strictly_increasing(s) or not _strictly_increasing(t):
        raise ValueError(f"need strictly increasing 1-based triples, got s={s} t={t}")
    unknowns = tuple((a, b) for a in s for b in t)
    rows, meta = [], []
    for a, sa in enumerate(s):
        plain = np.zeros(9)
        plain[3 * a : 3 * a + 3] = 1.0
        weighted = np.zeros(9)
        weighted[3 * a : 3 * a + 3] = t
        rows += [plain, weighted]
        meta += [f"row_plain[{sa}]", f"row_weighted[{sa}]"]
    for b, tb in enumerate(t):
        r = np.zeros(9)
        r[b::3] = s
        rows.append(r)
        meta.append(f"col_weighted[{tb}]")
    for b, tb in enumerate(t):
        r = np.zeros(9)
        r[b::3] = 1.0
        rows.append(r)
        meta.append(f"col_plain[{tb}]")
    sw = np.array([x for x in s for _ in t], dtype=float)
    tw = np.array([y for _ in s for y in t], dtype=float)
    rows += [np.ones(9), tw, sw, sw * tw]
    meta += ["global_pp", "global_pw", "global_wp", "global_ww"]
    return ConstraintSystem(np.array(rows), tuple(meta), unknowns)


def build_support_system(support) -> ConstraintSystem:
    """Constraint system for an arbitrary support of 1-based ``(row, col)`` cells."""
    cells = tuple(sorted({(int(i), int(j)) for i, j in support}))
    if not cells or min(min(c) for c in cells) < 1:
        raise ValueError("support must be a non-empty set of 1-based cells")
    srows = sorted({i for i, _ in cells})
    scols = sorted({j for _, j in cells})
    si = np.array([i for i, _ in cells], dtype=float)
    tj = np.array([j for _, j in cells], dtype=float)
    rows, meta = [], []
    for r in srows:
        mask = si == r
        rows += [mask * 1.0, mask * tj]
        meta += [f"row_plain[{r}]", f"row_weighted[{r}]"]
    for c in scols:
        mask = tj == c
        rows += [mask * 1.0, mask * si]
        meta += [f"col_plain[{c}]", f"col_weighted[{c}]"]
    rows += [np.ones(len(cells)), tj, si, si * tj]
    meta += ["global_pp", "global_pw", "global_wp", "global_ww"]
    return ConstraintSystem(np.array(rows), tuple(meta), cells)


def _matrix(m) -> np.ndarray:
    return np.asarray(m.matrix if isinstance(m, ConstraintSystem) else m, dtype=np.float64)


def row_echelon(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form by Gauss-Jordan elimination with partial pivoting.

    Entries below ``tol`` times the largest absolute entry count as zero.
    Returns the reduced matrix and the pivot columns.
    """
    a = _matrix(m).copy()
    nrows, ncols = a.shape
    scale = np.abs(a).max() if a.size else 0.0
    if scale == 0.0:
        return a, []
    thresh = tol * scale
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= thresh:
            a[r:, c] = 0.0
            continue
        a[[r, p]] = a[[p, r]]
        a[r] /= a[r, c]
        others = np.arange(nrows) != r
        a[others] -= np.outer(a[others, c], a[r])
        a[others, c] = 0.0
        pivots.append(c)
        r += 1
    a[np.abs(a) <= thresh] = 0.0
    return a, pivots


def numerical_rank(m, tol: float = DEFAULT_TOL) -> int:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return len(row_echelon(m, tol)[1])


def nullspace_witness(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unit-norm ``v`` with ``M v = 0``, read off the first free column of the RREF."""
    mat = _matrix(m)
    rref, pivots = row_echelon(mat, tol)
    free = [c for c in range(mat.shape[1]) if c not in pivots]
    if not free:
        raise NoDeficiencyError("matrix has full column rank; no null vector")
    f = free[0]
    v = np.zeros(mat.shape[1])
    v[f] = 1.0
    for r, c in enumerate(pivots):
        v[c] = -rref[r, f]
    v /= np.linalg.norm(v)
    resid = np.linalg.norm(mat @ v)
    if resid > 1e-6 * max(1.0, np.abs(mat).max()):
        raise ArithmeticError(f"null vector residual {resid:g} too large")
    return v


def annihilator(w) -> np.ndarray:
    """The vector orthogonal to both (1, 1, 1) and ``w`` for three distinct weights."""
    w1, w2, w3 = (float(x) for x in w)
    return np.array([w2 - w3, w3 - w1, w1 - w2])


def rank_one_witness(s, t) -> np.ndarray:
    """Closed-form null vector of the 3x3 system, ``u(s) (x) u(t)`` flattened row-major."""
    return np.outer(annihilator(s), annihilator(t)).ravel()


def eliminated_last_column(s, t) -> np.ndarray:
    """Last column of the reduced 16 x 9 system in closed form (first 8 rows).

    Each ratio has denominator ``(s1 - s2)(t1 - t2)`` or a factor of it,
    which is non-zero for strictly increasing indices; asserted here.
    """
    s1, s2, s3 = (float(x) for x in s)
    t1, t2, t3 = (float(x) for x in t)
    den = s1 * t1 - s1 * t2 - s2 * t1 + s2 * t2
    assert den == (s1 - s2) * (t1 - t2) and den != 0
    return np.array(
        [
            (-s2 * t2 + s2 * t3 + s3 * t2 - s3 * t3) / den,
            (s2 * t1 - s2 * t3 - s3 * t1 + s3 * t3) / den,
            (-s2 + s3) / (s1 - s2),
            (s1 * t2 - s1 * t3 - s3 * t2 + s3 * t3) / den,
            (-s1 * t1 + s1 * t3 + s3 * t1 - s3 * t3) / den,
            (s1 - s3) / (s1 - s2),
            (t2 - t3) / (-t1 + t2),
            (-t1 + t3) / (-t1 + t2),
        ]
    )


def is_rank_one_pattern(v, s, t, tol: float = 1e-9) -> bool:
    """True if ``v`` is parallel to the closed-form rank-one witness."""
    w = rank_one_witness(s, t)
    v = np.asarray(v, dtype=float)
    cos = abs(v @ w) / (np.linalg.norm(v) * np.linalg.norm(w))
    return bool(abs(1.0 - cos) <= tol)


def certify_correctable_rank(support, tol: float = DEFAULT_TOL) -> bool:
    """True when the parities determine every error value on ``support``."""
    system = build_support_system(support)
    return numerical_rank(system, tol) == len(system.unknowns_meta)


def random_e33_tuple(rng: np.random.Generator, n: int, m: int):
    s = tuple(int(x) for x in np.sort(rng.choice(np.arange(1, n + 1), 3, replace=False)))
    t = tuple(int(x) for x in np.sort(rng.choice(np.arange(1, m + 1), 3, replace=False)))
    return s, t


def rank_sweep(trials: int, seed: int, n: int = 50, m: int = 50, tol: float = DEFAULT_TOL):
    """Yield ``(s, t, rank)`` for random valid index triples."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        s, t = random_e33_tuple(rng, n, m)
        yield s, t, numerical_rank(build_e33_system(s, t), tol)
