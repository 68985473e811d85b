"""Time the numba kernels against the pure-numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Each backend is imported
directly, so one process measures both; numba compile time is excluded by a
warm-up call.
"""

import argparse
import timeit

import numpy as np

from subsig._kernels import _numpy

try:
    from subsig._kernels import _numba
except ImportError:
    _numba = None

from subsig.families import random_semicoherent


def cases(n, orderings, seed):
    rng = np.random.default_rng(seed)
    phi = random_semicoherent(n, rng, max_paths=2 * n)
    table = phi.table
    mmask = (1 << (n // 2)) - 1
    values = table.astype(np.int64)
    ordering_n = min(n, 10)
    orders = np.array([rng.permutation(ordering_n) for _ in range(orderings)], dtype=np.int8)
    small = random_semicoherent(ordering_n, rng).table
    weights = rng.integers(1, 100, size=orderings).astype(np.int64)
    return {
        "mobius": lambda k: k.mobius(values, n),
        "zeta": lambda k: k.zeta(values, n),
        "monotone_witness": lambda k: k.monotone_witness(table, n),
        "critical_counts": lambda k: k.critical_counts(table, n, mmask),
        "level_counts": lambda k: k.level_counts(table, n, mmask),
        "bp_critical_counts": lambda k: k.bp_critical_counts(table, n),
        "killing_positions": lambda k: k.killing_positions(orders, small),
        "quality_counts": lambda k: k.quality_counts(orders, weights, ordering_n),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=18, help="components for the subset kernels")
    parser.add_argument("--orderings", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    print(f"n = {args.n}, orderings = {args.orderings}, best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, call in cases(args.n, args.orderings, args.seed).items():
        t_np = min(timeit.repeat(lambda: call(_numpy), number=1, repeat=args.repeat))
        if _numba is None:
            print(f"{name:<20}{t_np * 1e3:>12.2f}{'n/a':>12}")
            continue
        call(_numba)
        t_nb = min(timeit.repeat(lambda: call(_numba), number=1, repeat=args.repeat))
        print(f"{name:<20}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
