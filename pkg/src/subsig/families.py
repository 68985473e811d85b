"""Families of semicoherent structure functions for exhaustive and random checks."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .structure import StructureFunction

MAX_EXHAUSTIVE = 5


@lru_cache(maxsize=None)
def monotone_tables(n: int) -> np.ndarray:
    """Every monotone Boolean function of n variables, one truth table per row.

    A monotone f on n variables is a pair (f0, f1) of monotone functions on
    n - 1 variables with f0 <= f1, f0 the cofactor at x_n = 0. Counts are the
    Dedekind numbers 3, 6, 20, 168, 7581 for n = 1..5.
    """
    if n == 0:
        return np.array([[0], [1]], dtype=np.uint8)
    if n > MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE}")
    prev = monotone_tables(n - 1)
    below = (prev[:, None, :] <= prev[None, :, :]).all(axis=2)
    lo, hi = np.nonzero(below)
    out = np.concatenate([prev[lo], prev[hi]], axis=1)
    out.setflags(write=False)
    return out


def semicoherent_functions(n: int) -> list[StructureFunction]:
    """All monotone functions with phi(empty) = 0 and phi(C) = 1."""
    tables = monotone_tables(n)
    keep = (tables[:, 0] == 0) & (tables[:, -1] == 1)
    return [StructureFunction(n, t) for t in tables[keep]]


def random_semicoherent(n: int, rng: np.random.Generator, max_paths: int | None = None) -> StructureFunction:
    """Upward closure of a few random nonempty path sets."""
    count = int(rng.integers(1, (max_paths or n + 1) + 1))
    paths = []
    for _ in range(count):
        mask = 0
        while mask == 0:
            mask = int(rng.integers(1, 1 << n))
        paths.append([i + 1 for i in range(n) if mask >> i & 1])
    return StructureFunction.from_path_sets(paths, n)


def random_monotone_extension(n: int, rng: np.random.Generator) -> StructureFunction:
    """Random semicoherent function on n = 6 built from two stacked 5-variable ones.

    Draws f1 uniformly from the 7581 monotone functions of 5 variables and
    f0 uniformly among those below it, rejecting the two constants.
    """
    if n != MAX_EXHAUSTIVE + 1:
        raise ValueError("extension sampling targets n = 6")
    base = monotone_tables(MAX_EXHAUSTIVE)
    while True:
        f1 = base[rng.integers(len(base))]
        candidates = np.nonzero((base <= f1).all(axis=1))[0]
        f0 = base[candidates[rng.integers(len(candidates))]]
        table = np.concatenate([f0, f1])
        if table[0] == 0 and table[-1] == 1:
            return StructureFunction(n, table)
