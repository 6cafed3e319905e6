"""Compare the numba and numpy backends of the exhaustive 2-cocycle check.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--large]

Each case is a valid bilinear cocycle table on (Z/m)^k, so both kernels
visit every triple (the worst case).
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from twistlat import kernels
from twistlat.cocycle_pairing import BilinearCocycle

CASES = [(2, 4), (4, 2), (3, 3), (3, 4), (4, 4)]
LARGE = [(2, 10), (4, 5)]  # |G| = 1024; the numpy path takes ~30 s each


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--large", action="store_true", help="also time groups of order 1024")
    args = parser.parse_args()

    if kernels._first_violation_numba is None:
        print("numba not available; only the numpy backend is timed")
    rng = random.Random(0)
    print(f"{'group':>10} {'|G|':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for m, k in CASES + (LARGE if args.large else []):
        beta = [[rng.randrange(m) for _ in range(k)] for _ in range(k)]
        table = BilinearCocycle(m, beta).table(m)
        add = kernels.group_addition_table(m, k)
        t_np = best_of(lambda: kernels._first_violation_numpy(table, add, m), args.repeat)
        if kernels._first_violation_numba is not None:
            kernels._first_violation_numba(table, add, np.int64(m))  # compile outside the timing
            t_nb = best_of(lambda: kernels._first_violation_numba(table, add, np.int64(m)), args.repeat)
            print(f"{f'(Z/{m})^{k}':>10} {m**k:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x", flush=True)
        else:
            print(f"{f'(Z/{m})^{k}':>10} {m**k:>6} {t_np:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
