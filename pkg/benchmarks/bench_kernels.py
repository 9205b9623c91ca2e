"""Compare the compiled and pure-Python kernels.

Times the Hessenberg-QR eigensolver on CMV matrices and the Aberth root
finder on orthogonal polynomials, checks that both backends agree, and
prints a table of median wall times.

    python benchmarks/bench_kernels.py --sizes 10 40 100 --repeat 5
"""

import argparse
import statistics
import time

import numpy as np

from cmvrmt import available_backends
from cmvrmt.cmv import build_cmv
from cmvrmt.opuc import szego_forward
from cmvrmt.spectra import eigvals, match_distance, polyroots


def _string(rng, n):
    return 0.95 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def _median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def run(sizes, repeat, seed=0):
    backends = available_backends()
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        a = _string(rng, n)
        C = build_cmv(a)
        phi = szego_forward(a)[-1]
        row = {"n": n}
        ref_e = ref_r = None
        for b in backends:
            row[f"eig_{b}"] = _median_time(lambda: eigvals(C, backend=b), repeat)
            row[f"roots_{b}"] = _median_time(lambda: polyroots(phi, backend=b), repeat)
            e, r = eigvals(C, backend=b), polyroots(phi, backend=b)
            if ref_e is None:
                ref_e, ref_r = e, r
            else:
                row["eig_diff"] = match_distance(ref_e, e)
                row["roots_diff"] = match_distance(ref_r, r)
        rows.append(row)
    return backends, rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 40, 100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    backends, rows = run(args.sizes, args.repeat, args.seed)
    head = f"{'n':>5}" + "".join(f"{'eig ' + b:>16}{'roots ' + b:>16}" for b in backends)
    if len(backends) > 1:
        head += f"{'eig x':>9}{'roots x':>9}{'max diff':>11}"
    print(head)
    for r in rows:
        line = f"{r['n']:>5}" + "".join(
            f"{r['eig_' + b] * 1e3:>14.2f}ms{r['roots_' + b] * 1e3:>14.2f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{r['eig_python'] / r['eig_compiled']:>9.1f}"
            line += f"{r['roots_python'] / r['roots_compiled']:>9.1f}"
            line += f"{max(r['eig_diff'], r['roots_diff']):>11.1e}"
        print(line)


if __name__ == "__main__":
    main()
