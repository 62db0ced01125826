"""Compare the compiled Legendre kernels against the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--points 1000000] [--lmax 10] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from steerwave import _kernels_py, kernels

try:
    from steerwave import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _time(fn, repeat):
    fn()
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=1_000_000)
    parser.add_argument("--lmax", type=int, default=10)
    parser.add_argument("--d", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    x = rng.uniform(-1.0, 1.0, args.points)
    weights = rng.standard_normal(args.lmax + 1)
    print(f"active backend: {kernels.BACKEND}; d={args.d} lmax={args.lmax} points={args.points}")

    cases = {
        "legendre_table": lambda mod: (lambda: mod.legendre_table(args.d, args.lmax, x)),
        "legendre_sum": lambda mod: (lambda: mod.legendre_sum(args.d, weights, x)),
    }
    print(f"{'kernel':<16}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}{'max diff':>11}")
    for name, make in cases.items():
        t_py = _time(make(_kernels_py), args.repeat)
        if _kernels_c is None:
            print(f"{name:<16}{t_py * 1e3:>12.2f}{'n/a':>13}")
            continue
        t_c = _time(make(_kernels_c), args.repeat)
        diff = np.abs(np.asarray(make(_kernels_c)()) - make(_kernels_py)()).max()
        print(f"{name:<16}{t_py * 1e3:>12.2f}{t_c * 1e3:>13.2f}{t_py / t_c:>8.1f}x{diff:>11.1e}")


if __name__ == "__main__":
    main()
