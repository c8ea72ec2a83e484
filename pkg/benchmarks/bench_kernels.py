"""Time the numba and numpy paths of each hot kernel.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call per kernel includes JIT compilation and is reported
separately as "warm-up".
"""

import argparse
import time

import numpy as np

from basscensus import _kernels as K


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases(rng):
    c = rng.integers(0, 8, size=(16, 16, 16))
    a = rng.integers(0, 8, size=(20000, 16))
    b = rng.integers(0, 8, size=(20000, 16))
    mats = [rng.integers(0, 3, size=(24, 40)) for _ in range(200)]
    smith = [rng.integers(0, 2 ** 8, size=(12, 12)) for _ in range(200)]
    gram = np.array([[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 6, 3], [0, 0, 3, 6]])
    bounds = np.array([6, 6, 4, 4])
    return {
        "mul_batch 20000x16": lambda nb: K.mul_batch(c, a, b, 8, use_numba=nb),
        "rref 200 x (24x40) mod 3": lambda nb: [K.rref(m, 3, use_numba=nb) for m in mats],
        "smith 200 x (12x12) mod 2^8": lambda nb: [K.smith_valuations(m, 2, 8, use_numba=nb)
                                                   for m in smith],
        "box_vectors norm 12": lambda nb: K.box_vectors(gram, bounds, 12, use_numba=nb),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"numba available: {K.HAVE_NUMBA}")
    print(f"{'kernel':32s} {'numpy':>10s} {'numba':>10s} {'warm-up':>10s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        slow = _time(lambda: fn(False), args.repeat)
        if K.HAVE_NUMBA:
            t = time.perf_counter()
            fn(True)
            warm = time.perf_counter() - t
            fast = _time(lambda: fn(True), args.repeat)
            print(f"{name:32s} {slow:10.4f} {fast:10.4f} {warm:10.3f} {slow / fast:7.1f}x")
        else:
            print(f"{name:32s} {slow:10.4f} {'-':>10s} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
