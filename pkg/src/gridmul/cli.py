"""Command line entry point: ``gridmul bench | demo | rank-sweep``."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import matrix
from .bench import ConfigError, ExperimentConfig, render_table, run_experiment
from .corrector import correct
from .encoding import GridCodeSpec, encode_product
from .injection import ErrorPattern, Fault, Scenario, Target, inject
from .rank import rank_sweep
from .syndrome import compute_syndrome


def _floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _scenarios(text):
    return tuple(Scenario.parse(x) for x in text.split(",") if x.strip())


def _methods(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _bench(args) -> int:
    n, k, m = (1024, 4096, 1024) if args.paper_scale else (args.n, args.k, args.m)
    cfg = ExperimentConfig(
        n=n, k=k, m=m,
        deltas=args.delta,
        scenarios=args.scenarios,
        trials=args.trials,
        seed=args.seed,
        methods=args.methods,
        out=args.out,
        fmt=args.format,
        noise_scale=args.noise_scale,
    )
    dump = (lambda text: sys.stderr.write(text)) if args.dump_syndrome else None
    _, rows = run_experiment(cfg, dump=dump)
    text = render_table(rows, cfg.fmt)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _demo(args) -> int:
    size = args.size
    if size < 3:
        raise ConfigError("--size must be at least 3")
    spec = GridCodeSpec(size, size, size)
    a = matrix.random_matrix(size, size, 1)
    b = matrix.random_matrix(size, size, 2)
    delta = args.delta
    faults = (Fault(Target.OUTPUT, 0, 1, 5.0), Fault(Target.OUTPUT, size - 1, 1, -3.0))
    pattern = ErrorPattern(Scenario.C_DOUBLE, faults)
    np.set_printoptions(precision=4, suppress=True, linewidth=120)
    print(f"backend: {matrix.BACKEND}")
    print(f"coded product of two {size}x{size} matrices, faults: {pattern.to_json()}")
    print(encode_product(a, b, spec).full)
    c_bar, _ = inject(a, b, pattern, spec)
    syn = compute_syndrome(c_bar, spec, delta)
    print(f"\nsyndrome at delta={delta}:")
    print(syn.dump(), end="")
    res = correct(c_bar, syn, spec)
    print(f"\noutcome: {res.kind.value}")
    print(res.repairs_csv(), end="")
    if res.corrected is not None:
        err = np.abs(res.corrected.data - matrix.multiply(a, b)).max()
        print(f"max deviation from A @ B after repair: {err:.3g}")
    return 0


def _rank_sweep(args) -> int:
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["s1", "s2", "s3", "t1", "t2", "t3", "rank"])
        for s, t, r in rank_sweep(args.trials, args.seed, args.n, args.m):
            w.writerow([*s, *t, r])
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridmul", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="correction rate and overhead per scenario")
    b.add_argument("--n", type=int, default=256)
    b.add_argument("--k", type=int, default=512)
    b.add_argument("--m", type=int, default=256)
    b.add_argument("--paper-scale", action="store_true", help="use n=m=1024, k=4096")
    b.add_argument("--delta", type=_floats, default=(0.5, 0.1, 0.01), help="comma-separated thresholds")
    b.add_argument("--scenarios", type=_scenarios, default=tuple(Scenario), help="subset of a,b,c,d,e,f")
    b.add_argument("--trials", type=int, default=1000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--methods", type=_methods, default=("grid", "checksum"))
    b.add_argument("--format", choices=("csv", "markdown"), default="csv")
    b.add_argument("--out", default=None)
    b.add_argument("--noise-scale", type=float, default=0.0,
                   help="add uniform noise bounded by noise_scale*delta to the output")
    b.add_argument("--dump-syndrome", action="store_true", help="dump syndromes of failed trials to stderr")
    b.set_defaults(func=_bench)

    d = sub.add_parser("demo", help="worked example with a syndrome dump")
    d.add_argument("--size", type=int, default=6)
    d.add_argument("--delta", type=float, default=0.1)
    d.set_defaults(func=_demo)

    r = sub.add_parser("rank-sweep", help="rank of the 3x3 pattern system for random index triples")
    r.add_argument("--trials", type=int, default=200)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--n", type=int, default=50)
    r.add_argument("--m", type=int, default=50)
    r.add_argument("--out", default=None)
    r.set_defaults(func=_rank_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"gridmul: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
