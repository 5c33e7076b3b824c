"""Correction-rate and overhead experiments over the six fault scenarios.

Every trial draws fresh operands and a fault pattern from a seed derived
from ``(base seed, delta index, scenario index, trial index)``, so the
whole run minus wall times is a pure function of the config.
"""

from __future__ import annotations

import csv
import io
import os
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baseline import checksum_detect_correct, checksum_multiply
from .corrector import OutcomeKind, correct
from .encoding import GridCodeSpec, coded_multiply, encode_left, encode_right
from .injection import Scenario, inject, sample_scenario
from .matrix import derive_seed, multiply, random_matrix
from .syndrome import compute_syndrome

METHODS = ("grid", "checksum")
DEFAULT_DELTAS = (0.5, 0.1, 0.01)
# the single-checksum code has no mechanism for two simultaneous faults
CHECKSUM_SCENARIOS = frozenset({Scenario.A_SINGLE, Scenario.B_SINGLE, Scenario.C_SINGLE})
OUTCOMES = ("corrected-exact", "corrected-inexact", "missed", "refused", "miscorrected")
DASH = "−"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 256
    k: int = 512
    m: int = 256
    deltas: tuple[float, ...] = DEFAULT_DELTAS
    scenarios: tuple[Scenario, ...] = tuple(Scenario)
    trials: int = 1000
    seed: int = 0
    methods: tuple[str, ...] = METHODS
    out: str | None = None
    fmt: str = "csv"
    noise_scale: float = 0.0
    threads: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if min(self.n, self.k, self.m) < 1 or min(self.n, self.m) < 2:
            raise ConfigError("need n, m >= 2 and k >= 1")
        if not self.deltas or any(d < 0 for d in self.deltas):
            raise ConfigError("deltas must be non-negative")
        if any(d * 10 > 100 for d in self.deltas):
            raise ConfigError("delta too large for the fault magnitude range")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ConfigError(f"unknown methods: {sorted(unknown)}")
        if self.fmt not in ("csv", "markdown"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.noise_scale < 0:
            raise ConfigError("noise_scale must be non-negative")

    @property
    def spec(self) -> GridCodeSpec:
        return GridCodeSpec(self.n, self.k, self.m)


@dataclass(frozen=True)
class TrialRecord:
    method: str
    scenario: Scenario
    delta: float
    seed: int
    outcome: str
    supported: bool = True
    max_deviation: float = float("nan")
    t_coded: float = float("nan")
    t_plain: float = float("nan")
    pattern_json: str = field(default="", compare=False)

    def key(self):
        """Record identity without wall times."""
        return (self.method, self.scenario, self.delta, self.seed, self.outcome, self.supported, self.max_deviation)


def grade(kind: OutcomeKind, deviation: float, tau: float, delta: float) -> str:
    """Classify a finished trial; anything not provably restored is a failure."""
    if kind is OutcomeKind.UNCORRECTABLE:
        return "refused"
    if deviation <= tau:
        return "corrected-exact"
    if kind is OutcomeKind.CLEAN:
        return "missed"
    if deviation <= delta:
        return "corrected-inexact"
    return "miscorrected"


def _run_trial(cfg: ExperimentConfig, di: int, delta: float, si: int, scen: Scenario, trial: int, dump=None):
    spec = cfg.spec
    seed = derive_seed(cfg.seed, di, si, trial)
    a = random_matrix(spec.n, spec.k, derive_seed(seed, 0))
    b = random_matrix(spec.k, spec.m, derive_seed(seed, 1))
    pattern = sample_scenario(scen, spec, delta, derive_seed(seed, 2))
    if cfg.noise_scale > 0:
        pattern = type(pattern)(pattern.scenario, pattern.faults, cfg.noise_scale * delta, pattern.seed)
    tau = spec.tau(float(np.abs(a).max()), float(np.abs(b).max()))
    # noise makes every residual non-zero, so only flagged lines are repaired then
    sweep = tau if pattern.noise_delta == 0 else None

    t0 = time.perf_counter()
    ref = multiply(a, b)
    t_plain = time.perf_counter() - t0

    records = []
    grid_data = None
    if "grid" in cfg.methods or "checksum" in cfg.methods:
        t0 = time.perf_counter()
        clean = coded_multiply(encode_left(a, spec), encode_right(b, spec), spec)
        t_encode = time.perf_counter() - t0
        corrupted, _ = inject(a, b, pattern, spec, derive_seed(seed, 3), clean=clean)
        grid_data = corrupted.data

    if "grid" in cfg.methods:
        t0 = time.perf_counter()
        syn = compute_syndrome(corrupted, spec, delta)
        res = correct(corrupted, syn, spec, sweep_tol=sweep)
        t_fix = time.perf_counter() - t0
        out = res.corrected.data if res.corrected is not None else corrupted.data
        dev = float(np.abs(out - ref).max())
        outcome = grade(res.kind, dev, tau, delta)
        if dump is not None and outcome != "corrected-exact":
            dump(f"# grid scenario={scen.value} delta={delta} seed={seed} outcome={outcome}\n" + syn.dump())
        records.append(
            TrialRecord("grid", scen, delta, seed, outcome, True, dev, t_encode + t_fix, t_plain, pattern.to_json())
        )

    if "checksum" in cfg.methods:
        if scen not in CHECKSUM_SCENARIOS:
            records.append(TrialRecord("checksum", scen, delta, seed, "refused", False, pattern_json=pattern.to_json()))
        else:
            t0 = time.perf_counter()
            p = checksum_multiply(a, b)
            t_enc = time.perf_counter() - t0
            faulty = p.with_data(grid_data)
            t0 = time.perf_counter()
            res = checksum_detect_correct(faulty, delta, a, b)
            t_fix = time.perf_counter() - t0
            out = res.corrected.data if res.corrected is not None else faulty.data
            dev = float(np.abs(out - ref).max())
            records.append(
                TrialRecord(
                    "checksum", scen, delta, seed, grade(res.kind, dev, tau, delta), True, dev,
                    t_enc + t_fix, t_plain, pattern.to_json(),
                )
            )
    return records


def pool_size(requested: int | None = None) -> int:
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("GRIDMUL_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def run_experiment(cfg: ExperimentConfig, dump=None) -> tuple[list[TrialRecord], list[dict]]:
    jobs = [
        (di, d, si, sc, t)
        for di, d in enumerate(cfg.deltas)
        for si, sc in enumerate(cfg.scenarios)
        for t in range(cfg.trials)
    ]
    workers = pool_size(cfg.threads)
    if workers == 1:
        nested = [_run_trial(cfg, *job, dump=dump) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            nested = list(ex.map(lambda job: _run_trial(cfg, *job, dump=dump), jobs))
    records = [r for rs in nested for r in rs]
    return records, aggregate(records)


def aggregate(records) -> list[dict]:
    groups = defaultdict(list)
    for r in records:
        groups[(r.scenario, r.method, r.delta)].append(r)
    rows = []
    for (scen, method, delta), rs in groups.items():
        counts = {o: sum(r.outcome == o for r in rs) for o in OUTCOMES}
        supported = all(r.supported for r in rs)
        if supported:
            rate = counts["corrected-exact"] / len(rs)
            latency = float(np.mean([r.t_coded for r in rs]) / np.mean([r.t_plain for r in rs]))
        else:
            rate = latency = None
        rows.append(dict(scenario=scen, method=method, delta=delta, trials=len(rs), rate=rate, latency=latency, **counts))
    order = {s: i for i, s in enumerate(Scenario)}
    rows.sort(key=lambda r: (order[r["scenario"]], METHODS.index(r["method"]), -r["delta"]))
    return rows


def format_rate(rate: float | None) -> str:
    if rate is None:
        return DASH
    return f"{rate * 100:.2f}".rstrip("0").rstrip(".") + "%"


def format_latency(latency: float | None) -> str:
    return DASH if latency is None else f"{latency:.2f}x"


def render_table(rows, fmt: str = "markdown") -> str:
    """Render aggregate rows (from :func:`aggregate`) as markdown or CSV."""
    if not rows:
        raise ValueError("nothing to render")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "method", "delta", "trials", *OUTCOMES, "rate", "latency"])
        for r in rows:
            w.writerow(
                [r["scenario"].value, r["method"], r["delta"], r["trials"], *(r[o] for o in OUTCOMES),
                 format_rate(r["rate"]), format_latency(r["latency"])]
            )
        return buf.getvalue()
    if fmt != "markdown":
        raise ValueError(f"unknown format {fmt!r}")
    deltas = sorted({r["delta"] for r in rows}, reverse=True)
    methods = [m for m in METHODS if any(r["method"] == m for r in rows)]
    cell = {(r["scenario"], r["method"], r["delta"]): r for r in rows}
    head = ["scenario"] + [f"{m} {label} (δ={d})" for d in deltas for m in methods for label in ("Rate", "Latency")]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for scen in Scenario:
        if not any(k[0] is scen for k in cell):
            continue
        vals = [scen.value]
        for d in deltas:
            for m in methods:
                r = cell.get((scen, m, d))
                vals += [format_rate(r["rate"]), format_latency(r["latency"])] if r else ["", ""]
        lines.append("| " + " | ".join(vals) + " |")
    return "\n".join(lines) + "\n"


def latency_ratio(size: int = 1024, repeats: int = 1, seed: int = 0, delta: float = 0.01) -> tuple[float, float, float]:
    """Wall time of encode + coded multiply + detect/correct versus a plain multiply.

    Returns ``(ratio, coded_seconds, plain_seconds)`` using the best of
    ``repeats`` runs for each side.
    """
    spec = GridCodeSpec(size, size, size)
    a = random_matrix(size, size, derive_seed(seed, 0))
    b = random_matrix(size, size, derive_seed(seed, 1))
    plain = coded = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        multiply(a, b)
        plain = min(plain, time.perf_counter() - t0)
        t0 = time.perf_counter()
        c_bar = coded_multiply(encode_left(a, spec), encode_right(b, spec), spec)
        correct(c_bar, compute_syndrome(c_bar, spec, delta), spec)
        coded = min(coded, time.perf_counter() - t0)
    return coded / plain, coded, plain
