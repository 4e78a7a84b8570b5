"""Numba vs numpy timings for the pointwise kernels and the shooting oracle.

    python3 benchmarks/bench_kernels.py [--size 200000] [--repeat 7]

Both variants are imported side by side, so the INDEFCRIT_DISABLE_NUMBA flag
does not matter here.  The first numba call (compilation) is excluded.
"""

import argparse
import timeit

import numpy as np

from indefcrit import _kernels as K

CASES = [
    ("radial_power", lambda u, v: (u, v, 4.0)),
    ("radial_power_hess", lambda u, v: (u, v, 4.0)),
    ("radial_logquad", lambda u, v: (u, v)),
    ("radial_logquad_hess", lambda u, v: (u, v)),
    ("scalar_power", lambda u, v: (u, 4.0)),
    ("scalar_logpower", lambda u, v: (u,)),
]


def best_of(fn, args, repeat):
    fn(*args)  # warm up / compile
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--nsteps", type=int, default=20_000)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    u, v = rng.standard_normal((2, args.size)) * 3.0
    print(f"numba available: {K.NUMBA_AVAILABLE}, default path: {'numba' if K.USE_NUMBA else 'numpy'}")
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max rel diff':>14}")
    for name, argf in CASES:
        a = argf(u, v)
        f_np, f_nb = getattr(K, name + "_np"), getattr(K, name + "_nb")
        t_np, t_nb = best_of(f_np, a, args.repeat), best_of(f_nb, a, args.repeat)
        diff = max(
            float(np.max(np.abs(x - y) / np.maximum(np.abs(x), 1e-300))) for x, y in zip(f_np(*a), f_nb(*a))
        )
        print(f"{name:<22}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}{diff:>14.1e}")

    sargs = (0.985, 4.0, np.pi, args.nsteps)
    t_np = best_of(K.shoot_rk4_np, sargs, max(1, args.repeat // 3))
    t_nb = best_of(K.shoot_rk4_nb, sargs, args.repeat)
    diff = abs(K.shoot_rk4_np(*sargs)[1] - K.shoot_rk4_nb(*sargs)[1])
    print(f"{'shoot_rk4':<22}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}{diff:>14.1e}")


if __name__ == "__main__":
    main()
