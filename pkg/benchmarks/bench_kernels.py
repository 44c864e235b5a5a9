"""Benchmark the compiled kernel core against the numpy fallback.

Times the four hot reductions on square grids of growing size and prints a
table of per-call times and speedups.  Run from the repo root:

    python benchmarks/bench_kernels.py [--sizes 256,1024,2304] [--repeat 5] [--p 1.5]
"""

import argparse
import time

import numpy as np

from superlap import _kernels_np
from superlap import _kernels_cy


def best_of(fn, repeat, *args):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(n, repeat, p):
    side = int(round(n**0.5))
    n = side * side
    h = 1.0 / side
    ax = h * (np.arange(side) + 0.5)
    gx, gy = np.meshgrid(ax, ax, indexing="ij")
    centers = np.ascontiguousarray(
        np.stack([gx.ravel(), gy.ravel()], axis=1))
    rng = np.random.default_rng(0)
    u = rng.standard_normal(n)
    v = rng.standard_normal(n)
    tail = np.abs(rng.standard_normal(n)) + 0.1
    expo = 2.0 + 0.5 * p
    w = _kernels_np.pairwise_weights(centers, h, expo)
    cell = h * h

    rows = []
    for name, args in (
        ("pairwise_weights", (centers, h, expo)),
        ("seminorm_power", (w, tail, cell, u, p)),
        ("pairing_power", (w, tail, cell, u, v, p)),
        ("dual_power", (w, tail, cell, u, p)),
    ):
        t_np = best_of(getattr(_kernels_np, name), repeat, *args)
        t_cy = best_of(getattr(_kernels_cy, name), repeat, *args)
        rows.append((n, name, t_np, t_cy, t_np / t_cy))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="256,1024,2304")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--p", type=float, default=1.5)
    args = ap.parse_args()
    print(f"{'n':>6}  {'kernel':<18} {'numpy (ms)':>12} {'cython (ms)':>12} "
          f"{'speedup':>8}")
    for size in (int(tok) for tok in args.sizes.split(",")):
        for n, name, t_np, t_cy, speedup in bench(size, args.repeat, args.p):
            print(f"{n:>6}  {name:<18} {1e3 * t_np:>12.3f} {1e3 * t_cy:>12.3f} "
                  f"{speedup:>8.1f}")


if __name__ == "__main__":
    main()
