"""Benchmark the trajectory kernels: numba JIT path vs pure-numpy fallback.

Run: python3 benchmarks/bench_kernels.py [--n-traj N] [--n-steps M]
The numpy fallback is what QFLOW_DISABLE_NUMBA=1 selects at import time;
here both implementations are timed in one process and checked for
bit-identical output.
"""

import argparse
import math
import time

import numpy as np

from qflow import _kernels


def timeit(fn, *args, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-traj", type=int, default=20000)
    ap.add_argument("--n-steps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
    x0 = rng.standard_normal(args.n_traj)
    noise = rng.standard_normal((args.n_traj, args.n_steps))
    dtau = 3.0 / args.n_steps
    decay = math.exp(-dtau)
    kick = math.sqrt(1.0 - decay * decay)

    cases = [
        ("ou_paths", (x0, noise, decay, kick, 0.0),
         _kernels._ou_paths_np,
         getattr(_kernels, "_ou_paths_nb", None)),
        ("euler_paths", (x0, noise, 0.0, -1.0, dtau, math.sqrt(2.0 * dtau)),
         _kernels._euler_paths_np,
         getattr(_kernels, "_euler_paths_nb", None)),
    ]

    print(f"n_traj={args.n_traj} n_steps={args.n_steps}")
    print(f"{'kernel':<12} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for name, call_args, np_fn, nb_fn in cases:
        t_np, out_np = timeit(np_fn, *call_args)
        if nb_fn is None:
            print(f"{name:<12} {t_np:>10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        nb_fn(*call_args)  # compile outside the timed region
        t_nb, out_nb = timeit(nb_fn, *call_args)
        identical = np.array_equal(out_np, out_nb)
        print(f"{name:<12} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.2f}x"
              f"  bit-identical={identical}")
        if not identical:
            raise SystemExit(f"{name}: numba and numpy outputs differ")


if __name__ == "__main__":
    main()
