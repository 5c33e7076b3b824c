"""Fault injection for the coded product pipeline.

Three fault types are modelled:

* a corrupted symbol of the left operand A,
* a corrupted symbol of the right operand B,
* a corrupted symbol of the computed output C,

plus optional bounded noise ``eps`` uniform on ``[-delta, delta]`` over the
output data block.

Operand faults strike after the operand parities were generated: parity
rows of A-bar and parity columns of B-bar come from the clean operands,
while the data block is computed from the corrupted ones. A fault at
``A[i, l]`` therefore shifts row ``i`` of C by ``e * B[l, :]`` against
clean parities. (Corrupting A *before* encoding would make the coded
product self-consistent and the fault invisible.)
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .encoding import GridCodedProduct, GridCodeSpec, coded_multiply, encode_left, encode_right
from .matrix import ShapeError, as_matrix, multiply

MAX_MAGNITUDE = 100.0


class Target(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    OUTPUT = "output"


class Scenario(enum.Enum):
    A_SINGLE = "a"
    B_SINGLE = "b"
    C_SINGLE = "c"
    A_AND_C = "d"
    B_AND_C = "e"
    C_DOUBLE = "f"

    @classmethod
    def parse(cls, letter: str) -> "Scenario":
        try:
            return cls(letter.strip().lower())
        except ValueError:
            raise ValueError(f"unknown scenario {letter!r}; expected one of a-f") from None


_SCENARIO_TARGETS = {
    Scenario.A_SINGLE: (Target.LEFT,),
    Scenario.B_SINGLE: (Target.RIGHT,),
    Scenario.C_SINGLE: (Target.OUTPUT,),
    Scenario.A_AND_C: (Target.LEFT, Target.OUTPUT),
    Scenario.B_AND_C: (Target.RIGHT, Target.OUTPUT),
    Scenario.C_DOUBLE: (Target.OUTPUT, Target.OUTPUT),
}


class Fault(NamedTuple):
    target: Target
    row: int
    col: int
    magnitude: float


def min_magnitude(delta: float) -> float:
    """Smallest injected fault magnitude for detection threshold ``delta``."""
    return max(10.0 * delta, 1.0)


def _region(target: Target, spec: GridCodeSpec) -> tuple[int, int]:
    return {
        Target.LEFT: (spec.n, spec.k),
        Target.RIGHT: (spec.k, spec.m),
        Target.OUTPUT: (spec.n, spec.m),
    }[target]


@dataclass(frozen=True)
class ErrorPattern:
    scenario: Scenario | None
    faults: tuple[Fault, ...]
    noise_delta: float = 0.0
    seed: int | None = None

    def check(self, spec: GridCodeSpec, delta: float | None = None) -> None:
        """Raise if a fault lies outside its target, or (given ``delta``) is too small."""
        for f in self.faults:
            rows, cols = _region(f.target, spec)
            if not (0 <= f.row < rows and 0 <= f.col < cols):
                raise ShapeError(f"{f.target.value} fault at ({f.row}, {f.col}) outside {rows}x{cols}")
            if delta is not None and abs(f.magnitude) < min_magnitude(delta):
                raise ValueError(f"fault magnitude {f.magnitude} below floor {min_magnitude(delta)}")
        if self.noise_delta < 0:
            raise ValueError("noise_delta must be non-negative")

    def to_json(self) -> str:
        return json.dumps(
            {
                "scenario": self.scenario.value if self.scenario else None,
                "faults": [
                    {"target": f.target.value, "row": f.row, "col": f.col, "magnitude": f.magnitude}
                    for f in self.faults
                ],
                "noise_delta": self.noise_delta,
                "seed": self.seed,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "ErrorPattern":
        d = json.loads(text)
        faults = tuple(
            Fault(Target(f["target"]), int(f["row"]), int(f["col"]), float(f["magnitude"])) for f in d["faults"]
        )
        scen = Scenario(d["scenario"]) if d.get("scenario") else None
        return cls(scen, faults, float(d.get("noise_delta", 0.0)), d.get("seed"))


@dataclass(frozen=True)
class InjectionReport:
    pattern: ErrorPattern
    effective_support: frozenset[tuple[int, int]]
    seed: int
    clean: GridCodedProduct = field(repr=False)


def sample_noise(dims, delta: float, seed: int) -> np.ndarray:
    """``n x m`` matrix of i.i.d. uniform[-delta, delta] entries."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    n, m = (dims.n, dims.m) if isinstance(dims, GridCodeSpec) else dims
    if delta == 0:
        return np.zeros((n, m))
    rng = np.random.default_rng(int(seed) & (2**64 - 1))
    return rng.uniform(-delta, delta, size=(n, m))


def inject(a, b, pattern: ErrorPattern, spec: GridCodeSpec, seed: int = 0, *, clean: GridCodedProduct | None = None):
    """Run the coded pipeline with ``pattern`` applied.

    Returns the corrupted coded product and a report with the ground-truth
    set of output cells that differ from the fault-free pipeline. Pass
    ``clean`` to reuse an already computed fault-free coded product.
    """
    a = as_matrix(a, name="A")
    b = as_matrix(b, name="B")
    pattern.check(spec)
    if clean is None:
        clean = coded_multiply(encode_left(a, spec), encode_right(b, spec), spec)
    data = clean.data.copy()

    left = [f for f in pattern.faults if f.target is Target.LEFT]
    right = [f for f in pattern.faults if f.target is Target.RIGHT]
    if left or right:
        a_bad, b_bad = a.copy(), b.copy()
        for f in left:
            a_bad[f.row, f.col] += f.magnitude
        for f in right:
            b_bad[f.row, f.col] += f.magnitude
        # entries are independent dot products, so recomputing only the
        # touched rows/columns equals the full faulty multiply bit for bit
        rows = sorted({f.row for f in left})
        cols = sorted({f.col for f in right})
        if rows:
            data[rows, :] = multiply(a_bad[rows], b_bad)
        if cols:
            data[:, cols] = multiply(a_bad, b_bad[:, cols])

    for f in pattern.faults:
        if f.target is Target.OUTPUT:
            data[f.row, f.col] += f.magnitude
    if pattern.noise_delta > 0:
        data += sample_noise(spec, pattern.noise_delta, seed)

    corrupted = clean.with_data(data)
    diff = np.argwhere(corrupted.data != clean.data)
    support = frozenset((int(i), int(j)) for i, j in diff)
    return corrupted, InjectionReport(pattern, support, seed, clean)


def sample_scenario(scenario: Scenario | str, spec: GridCodeSpec, delta: float, seed: int, *, noise: bool = False):
    """Random fault locations and magnitudes for one scenario.

    Magnitudes are uniform in ``[min_magnitude(delta), 100]`` with a random
    sign. ``noise=True`` also sets the pattern's noise bound to ``delta``.
    """
    if isinstance(scenario, str):
        scenario = Scenario.parse(scenario)
    rng = np.random.default_rng(int(seed) & (2**64 - 1))
    lo = min_magnitude(delta)
    if lo > MAX_MAGNITUDE:
        raise ValueError(f"delta {delta} leaves no room below the magnitude cap")
    targets = _SCENARIO_TARGETS[scenario]
    faults = []
    taken = set()
    for t in targets:
        rows, cols = _region(t, spec)
        if rows * cols < targets.count(t):
            raise ShapeError(f"{t.value} region too small for {targets.count(t)} distinct faults")
        while True:
            cell = (int(rng.integers(rows)), int(rng.integers(cols)))
            if (t, cell) not in taken:
                break
        taken.add((t, cell))
        mag = float(rng.uniform(lo, MAX_MAGNITUDE)) * (1.0 if rng.random() < 0.5 else -1.0)
        faults.append(Fault(t, cell[0], cell[1], mag))
    return ErrorPattern(scenario, tuple(faults), delta if noise else 0.0, int(seed))


def sample_output_pattern(
    spec: GridCodeSpec, n_rows: int, n_cols: int, delta: float, seed: int, *, fill: str = "cover"
) -> ErrorPattern:
    """Output-only faults spread over exactly ``n_rows`` rows and ``n_cols`` columns.

    ``fill="full"`` puts a fault on every intersection; ``"cover"`` picks a
    random subset of intersections that still touches every chosen row and
    column.
    """
    if not (1 <= n_rows <= spec.n and 1 <= n_cols <= spec.m):
        raise ShapeError(f"cannot place {n_rows}x{n_cols} lines in {spec.n}x{spec.m}")
    rng = np.random.default_rng(int(seed) & (2**64 - 1))
    rows = np.sort(rng.choice(spec.n, n_rows, replace=False))
    cols = np.sort(rng.choice(spec.m, n_cols, replace=False))
    if fill == "full":
        mask = np.ones((n_rows, n_cols), dtype=bool)
    elif fill == "cover":
        mask = rng.random((n_rows, n_cols)) < 0.5
        # guarantee every chosen line carries at least one fault
        for r in range(n_rows):
            mask[r, rng.integers(n_cols)] = True
        for c in range(n_cols):
            if not mask[:, c].any():
                mask[rng.integers(n_rows), c] = True
    else:
        raise ValueError(f"unknown fill {fill!r}")
    lo = min_magnitude(delta)
    faults = []
    for r, c in zip(*np.nonzero(mask)):
        mag = float(rng.uniform(lo, MAX_MAGNITUDE)) * (1.0 if rng.random() < 0.5 else -1.0)
        faults.append(Fault(Target.OUTPUT, int(rows[r]), int(cols[c]), mag))
    return ErrorPattern(None, tuple(faults), 0.0, int(seed))
