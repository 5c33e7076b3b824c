"""Dense real matrices: validation, fixed-order multiply, seeding and I/O.

Matrices are plain 2-D ``float64`` numpy arrays. :func:`as_matrix` is the
single gate that enforces the invariants (two dimensions, positive shape,
finite entries, C-contiguous) before a value enters the pipeline.

The multiply kernel is compiled (Cython) when the extension is built and
falls back to an equivalent numpy loop otherwise. Set
``GRIDMUL_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

if os.environ.get("GRIDMUL_BACKEND", "").lower() == "python":
    from . import _fallback as _k

    BACKEND = "python"
else:
    try:
        from . import _kernels as _k

        BACKEND = "compiled"
    except ImportError:  # extension not built
        from . import _fallback as _k

        BACKEND = "python"

UNIT_ROUNDOFF = 2.0**-53


class ShapeError(ValueError):
    """Operand shapes are incompatible."""


def as_matrix(x, *, name: str = "matrix") -> np.ndarray:
    """Validate ``x`` as a dense finite real matrix and return it as float64."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must have positive dimensions, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def multiply(a, b) -> np.ndarray:
    """Return ``a @ b`` with every entry summed in ascending inner index.

    Unlike BLAS the summation order is fixed, so results are reproducible
    bit for bit across runs and backends.
    """
    a = as_matrix(a, name="left operand")
    b = as_matrix(b, name="right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return _k.gemm(a, b)


def row_checks(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row plain sums and sums weighted by column number 1..cols."""
    return _k.row_checks(np.ascontiguousarray(x, dtype=np.float64))


def col_checks(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column plain sums and sums weighted by row number 1..rows."""
    return _k.col_checks(np.ascontiguousarray(x, dtype=np.float64))


def derive_seed(base: int, *keys: int) -> int:
    """Mix ``keys`` (trial index, scenario id, ...) into a 64-bit base seed."""
    ss = np.random.SeedSequence(entropy=int(base) & (2**64 - 1), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def random_matrix(rows: int, cols: int, seed: int) -> np.ndarray:
    """I.i.d. uniform[-1, 1] entries from a generator seeded with ``seed``."""
    if rows < 1 or cols < 1:
        raise ShapeError(f"rows and cols must be positive, got {rows}x{cols}")
    rng = np.random.default_rng(int(seed) & (2**64 - 1))
    return rng.uniform(-1.0, 1.0, size=(rows, cols))


def tau_struct(n: int, k: int, m: int, max_a: float, max_b: float) -> float:
    """Fault-free structural tolerance for residuals of an n x k x m product."""
    return 64.0 * UNIT_ROUNDOFF * k * max(n, m) ** 2 * max_a * max_b


# -- serialization ---------------------------------------------------------

_HEADER = struct.Struct("<II")


def to_bytes(x) -> bytes:
    """Raw format: rows, cols as little-endian uint32, then LE float64 row-major."""
    x = as_matrix(x)
    return _HEADER.pack(*x.shape) + x.astype("<f8").tobytes()


def from_bytes(buf: bytes) -> np.ndarray:
    if len(buf) < _HEADER.size:
        raise ValueError("buffer shorter than matrix header")
    rows, cols = _HEADER.unpack_from(buf)
    body = buf[_HEADER.size :]
    if len(body) != rows * cols * 8:
        raise ValueError(f"expected {rows * cols * 8} payload bytes for {rows}x{cols}, got {len(body)}")
    return as_matrix(np.frombuffer(body, dtype="<f8").reshape(rows, cols))


def save_binary(path, x) -> None:
    Path(path).write_bytes(to_bytes(x))


def load_binary(path) -> np.ndarray:
    return from_bytes(Path(path).read_bytes())


def to_csv(x) -> str:
    x = as_matrix(x)
    return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in x)


def from_csv(text: str) -> np.ndarray:
    rows = [[float(tok) for tok in line.split(",")] for line in text.splitlines() if line.strip()]
    if len({len(r) for r in rows}) > 1:
        raise ShapeError("ragged CSV rows")
    return as_matrix(rows)


def save_csv(path, x) -> None:
    Path(path).write_text(to_csv(x))


def load_csv(path) -> np.ndarray:
    return from_csv(Path(path).read_text())
