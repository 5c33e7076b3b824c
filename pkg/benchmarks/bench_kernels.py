"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 128,256,512] [--repeats 3]

Prints one CSV row per (kernel, size) with best-of-N seconds for each
backend, the speedup, and whether the outputs are bit-identical.
"""

import argparse
import csv
import sys
import time

from gridmul import _fallback, matrix

try:
    from gridmul import _kernels
except ImportError:
    sys.exit("compiled extension not built; run `pip install -e . --no-build-isolation` first")


def best_of(fn, args, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(x, y):
    if isinstance(x, tuple):
        return all(p.tobytes() == q.tobytes() for p, q in zip(x, y))
    return x.tobytes() == y.tobytes()


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="128,256,512")
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["kernel", "size", "compiled_s", "fallback_s", "speedup", "bit_identical"])
    for size in (int(s) for s in args.sizes.split(",")):
        a = matrix.random_matrix(size, size, 1)
        b = matrix.random_matrix(size, size, 2)
        for name, inputs in (("gemm", (a, b)), ("row_checks", (a,)), ("col_checks", (a,))):
            tc, oc = best_of(getattr(_kernels, name), inputs, args.repeats)
            tf, of = best_of(getattr(_fallback, name), inputs, args.repeats)
            w.writerow([name, size, f"{tc:.4g}", f"{tf:.4g}", f"{tf / tc:.2f}", same(oc, of)])


if __name__ == "__main__":
    main()
