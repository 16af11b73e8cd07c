"""Time the numba and pure-numpy kernel paths on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Compilation is triggered once before timing. Outputs of the two paths are
checked for agreement before anything is reported.
"""

import argparse
import time

import numpy as np

from stochreach import kernels
from stochreach.systems import AttitudeConfig


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    c = AttitudeConfig()
    J = np.ascontiguousarray(c.J_matrix)
    Jinv = np.ascontiguousarray(np.linalg.inv(J))
    rng = np.random.default_rng(0)
    X = np.array(c.x0_mean) + rng.normal(scale=0.05, size=(200_000, 7))
    W = rng.normal(scale=0.07, size=(200_000, 3))
    traj = rng.normal(size=(100_000, 6, 4))
    lo = np.full((6, 4), -1.0)
    hi = np.full((6, 4), 1.0)
    seed = kernels.mask_seed(20231)
    return {
        "uniform_block 1e5 x 5 x 4": (
            lambda: kernels.uniform_block_np(seed, 1, 0, 100_000, 5, 4),
            lambda: kernels.uniform_block_nb(seed, 1, 0, 100_000, 5, 4),
            0.0,
        ),
        "attitude_step 2e5 states": (
            lambda: kernels.attitude_step_np(X, W, J, Jinv, c.kp, c.kd, c.Ts),
            lambda: kernels.attitude_step_nb(X, W, J, Jinv, c.kp, c.kd, c.Ts),
            1e-14,
        ),
        "count_contained 1e5 x 6 x 4": (
            lambda: kernels.count_contained_np(traj, lo, hi),
            lambda: kernels.count_contained_nb(traj, lo, hi),
            0.0,
        ),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"default backend: {kernels.BACKEND}")
    print(f"{'kernel':32s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, (f_np, f_nb, tol) in workloads().items():
        a, b = f_np(), f_nb()  # also compiles the numba path
        if np.max(np.abs(np.asarray(a, float) - np.asarray(b, float))) > tol:
            raise SystemExit(f"{name}: paths disagree")
        t_np = _best(f_np, args.repeat)
        t_nb = _best(f_nb, args.repeat)
        print(f"{name:32s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
