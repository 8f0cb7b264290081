"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--quick]

Each row times one workload under both backends (best of ``--repeat``) and
checks that the results are identical before reporting the speedup.
"""

import argparse
import random
import sys
import timeit

from torsionph import kernels
from torsionph.complex import EXAMPLES, build_diagram_realization, staircase_diagrams
from torsionph.persistence import INTEGERS, PrimeField, module_on_grid


def boundary_like(rng, m, n):
    # sparse +-1 columns, the shape boundary matrices have
    rows = [[0] * n for _ in range(m)]
    for j in range(n):
        for i in rng.sample(range(m), min(3, m)):
            rows[i][j] = rng.choice((-1, 1))
    return rows


def dense(rng, m, n, bound=10):
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)]


def sparse_columns(rng, nrows, ncols, p):
    return [
        [(r, rng.randint(1, p - 1)) for r in sorted(rng.sample(range(nrows), min(3, nrows)))]
        for _ in range(ncols)
    ]


def workloads(quick):
    rng = random.Random(1)
    sizes = (10, 25) if quick else (10, 25, 50)
    out = []
    for s in sizes:
        M = boundary_like(rng, s, s + s // 2)
        out.append((f"snf boundary {s}x{s + s // 2}", lambda M=M, s=s: kernels.snf(M, s, s + s // 2)))
    for s in sizes[:2]:
        M = dense(rng, s, s, 3)
        out.append((f"snf dense {s}x{s}", lambda M=M, s=s: kernels.snf(M, s, s)))
    for s in sizes:
        M = dense(rng, s, 2 * s, 50)
        out.append((f"rank mod 101 {s}x{2 * s}", lambda M=M, s=s: kernels.rank_mod_p(M, 2 * s, 101)))
        out.append((f"nullspace mod 7 {s}x{2 * s}", lambda M=M, s=s: kernels.nullspace_mod_p(M, 2 * s, 7)))
    n = 200 if quick else 800
    cols = sparse_columns(rng, n, n, 2)
    out.append((f"column reduction mod 2, {n} columns", lambda: kernels.reduce_columns_mod_p(cols, n, 2)))
    K = build_diagram_realization(staircase_diagrams(3 if quick else 5)[0])
    out.append(("module_on_grid staircase over Z", lambda: module_on_grid(K, 1, INTEGERS, workers=1).values))
    rp2 = EXAMPLES["rp2"]()
    out.append(("module_on_grid rp2 over F_2", lambda: module_on_grid(rp2, 1, PrimeField(2), workers=1).values))
    return out


def best_time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available", file=sys.stderr)
    previous = kernels.backend()
    rows = []
    try:
        for name, fn in workloads(args.quick):
            times, results = {}, {}
            for b in backends:
                kernels.use_backend(b)
                results[b] = fn()
                times[b] = best_time(fn, args.repeat)
            if len({repr(r) for r in results.values()}) != 1:
                raise SystemExit(f"backends disagree on {name!r}")
            rows.append((name, times))
    finally:
        kernels.use_backend(previous)

    width = max(len(name) for name, _ in rows)
    header = f"{'workload':<{width}}  " + "  ".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for name, times in rows:
        line = f"{name:<{width}}  " + "  ".join(f"{times[b] * 1e3:>10.3f}ms" for b in backends)
        if len(backends) == 2:
            line += f"  {times['python'] / times['compiled']:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
