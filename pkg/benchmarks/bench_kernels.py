"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the MODESEEK_DISABLE_NUMBA flag does
not matter here.  Compilation happens in a warm-up call before timing.
"""
import argparse
import time

import numpy as np

from modeseek._accel import GAUSSIAN, numpy_kernels
from modeseek._accel import numba_kernels
from modeseek.io import REPLICA_SEED, generate_mixture


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def all_trajectories(kern, xs, h):
    return [kern.run_trajectory(xs, GAUSSIAN, h, float(s), 0.0005, 10_000)[0] for s in xs]


def cases(xs, grid):
    h = 1.0
    return {
        "density on 4097-point grid": lambda k: k.density_many(xs, GAUSSIAN, grid, h),
        "gradient on 4097-point grid": lambda k: k.gradient_many(xs, GAUSSIAN, grid, h),
        "one trajectory from 6.045": lambda k: k.run_trajectory(xs, GAUSSIAN, h, 6.045, 0.0005, 10_000)[0],
        "trajectories from all samples": lambda k: np.concatenate(all_trajectories(k, xs, h)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    xs = np.sort(generate_mixture(REPLICA_SEED, 500, 500, 3.0, -3.0, 1.0).points)
    grid = np.linspace(xs[0] - 3, xs[-1] + 3, 4097)

    print(f"{'case':<32} {'numba s':>10} {'numpy s':>10} {'speedup':>8} {'max |diff|':>11}")
    for name, fn in cases(xs, grid).items():
        fn(numba_kernels)
        t_fast, a = best_of(lambda: fn(numba_kernels), args.repeat)
        t_slow, b = best_of(lambda: fn(numpy_kernels), args.repeat)
        diff = float(np.max(np.abs(a - b))) if a.shape == b.shape else float("nan")
        print(f"{name:<32} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>7.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
