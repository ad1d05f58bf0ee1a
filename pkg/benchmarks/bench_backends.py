"""Compare the numba kernels against the pure-numpy fallbacks.

Usage: python3 benchmarks/bench_backends.py [--repeat 5] [--quick]

Each kernel is run once for warm-up (which triggers JIT compilation), then
timed ``repeat`` times; the best time is reported together with the max
absolute difference between the two backends.
"""
from __future__ import annotations

import argparse
import time

import numpy as np
from scipy.interpolate import CubicSpline

from hpcrack import kernels
from hpcrack._accel import HAS_NUMBA


def best_of(fn, repeat):
    fn()
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(quick):
    n = 513 if quick else 2049
    x = np.linspace(-1.0, 1.0, n)
    yield (f"kernel_matrix n={n}",
           lambda: kernels.kernel_matrix_numba(x, x, 1.0),
           lambda: kernels.kernel_matrix_numpy(x, x, 1.0))

    g = -x * (1 - x * x) / 6
    yield (f"hilbert_apply n={n}",
           lambda: kernels.hilbert_apply_numba(g),
           lambda: kernels.hilbert_apply_numpy(g))

    cs = CubicSpline(x, (1 - x * x) ** 2 / 24, bc_type="clamped")
    coef = np.ascontiguousarray(cs.c)
    m = 101 if quick else 301
    xs, ys = np.linspace(-3, 3, m), np.linspace(0, 3, m)
    yield (f"poisson_panels n={n} grid={m}x{m}",
           lambda: kernels.poisson_panels_numba(x, coef, xs, ys),
           lambda: kernels.poisson_panels_numpy(x, coef, xs, ys))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1
    print(f"{'kernel':40s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for name, fast, ref in cases(args.quick):
        a, b = fast(), ref()
        a = a if isinstance(a, tuple) else (a,)
        b = b if isinstance(b, tuple) else (b,)
        diff = max(float(np.max(np.abs(u - v))) for u, v in zip(a, b))
        t_fast = best_of(fast, args.repeat)
        t_ref = best_of(ref, args.repeat)
        print(f"{name:40s} {t_fast:11.4f} {t_ref:11.4f} {t_ref / t_fast:8.1f} {diff:10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
