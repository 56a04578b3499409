#!/usr/bin/env python3
"""Benchmark the compiled cell-sweep kernel against the pure numpy
fallback, and confirm they agree while at it.

Usage:
    python benchmarks/bench_backends.py [--max-depth 22] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from dyadicwalk import _pykernel, kernel


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def rel_diff(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1.0)))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-depth", type=int, default=22)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--lambda", dest="lam", type=float, default=0.3)
    args = ap.parse_args()

    if not kernel.HAVE_COMPILED:
        print("compiled kernel not available; showing pure numpy timings only")

    print(f"curve sweeps (v and u, lam={args.lam}):")
    print(f"{'depth':>6} {'cells':>10} {'compiled':>10} {'python':>10} "
          f"{'speedup':>8} {'max rel diff':>13}")
    for depth in range(14, args.max_depth + 1, 2):
        cells = 1 << (depth + 1)
        t_py = best_of(lambda: _pykernel.curve_values(args.lam, depth, want_u=True),
                       args.repeat)
        if kernel.HAVE_COMPILED:
            from dyadicwalk import _ckernel

            def compiled():
                v = np.empty(cells)
                u = np.empty(cells)
                _ckernel.sweep_range(args.lam, depth, 0, cells, v, u)
                return v, u

            t_c = best_of(compiled, args.repeat)
            vc, uc = compiled()
            vp, up = _pykernel.curve_values(args.lam, depth, want_u=True)
            d = max(rel_diff(vc, vp), rel_diff(uc, up))
            print(f"{depth:>6} {cells:>10} {t_c:>9.3f}s {t_py:>9.3f}s "
                  f"{t_py / t_c:>7.1f}x {d:>13.2e}")
        else:
            print(f"{depth:>6} {cells:>10} {'-':>10} {t_py:>9.3f}s")

    n = 1 << 23
    rng = np.random.default_rng(0)
    a = rng.normal(size=n)
    b = rng.normal(size=n)
    print(f"\ncompensated reductions ({n} elements):")
    t_py = best_of(lambda: _pykernel.comp_sum(a), args.repeat)
    print(f"{'comp_sum python':>22}: {t_py:.3f}s")
    if kernel.HAVE_COMPILED:
        from dyadicwalk import _ckernel
        t_c = best_of(lambda: _ckernel.comp_sum(a), args.repeat)
        print(f"{'comp_sum compiled':>22}: {t_c:.3f}s  ({t_py / t_c:.1f}x)")
        s_c, s_py = _ckernel.comp_sum(a), _pykernel.comp_sum(a)
        print(f"{'agreement':>22}: {abs(s_c - s_py):.3e}")
    t_py = best_of(lambda: _pykernel.comp_dot(a, b), args.repeat)
    print(f"{'comp_dot python':>22}: {t_py:.3f}s")
    if kernel.HAVE_COMPILED:
        t_c = best_of(lambda: _ckernel.comp_dot(a, b), args.repeat)
        print(f"{'comp_dot compiled':>22}: {t_c:.3f}s  ({t_py / t_c:.1f}x)")


if __name__ == "__main__":
    main()
