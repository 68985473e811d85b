"""Kernel dispatch.

The numba versions are used when numba imports cleanly and the environment
variable ``SUBSIG_DISABLE_NUMBA`` is unset (or ``0``). Object-dtype weights
always take the numpy path, since the compiled kernels are int64 only.
"""

import os

import numpy as np

from . import _numpy

try:
    if os.environ.get("SUBSIG_DISABLE_NUMBA", "0") not in ("", "0"):
        raise ImportError("numba disabled by SUBSIG_DISABLE_NUMBA")
    from . import _numba
except ImportError:
    _numba = None

NUMBA_ENABLED = _numba is not None
backend = _numba if NUMBA_ENABLED else _numpy

__all__ = [
    "NUMBA_ENABLED",
    "backend",
    "bp_critical_counts",
    "critical_counts",
    "killing_positions",
    "level_counts",
    "mobius",
    "monotone_witness",
    "popcounts",
    "quality_counts",
    "zeta",
]


def popcounts(n):
    return backend.popcounts(n)


def mobius(values, n):
    return backend.mobius(values, n)


def zeta(values, n):
    return backend.zeta(values, n)


def monotone_witness(table, n):
    return backend.monotone_witness(table, n)


def killing_positions(orders, table):
    return backend.killing_positions(orders, table)


def quality_counts(orders, weights, n):
    if weights.dtype == object:
        return _numpy.quality_counts(orders, weights, n)
    return backend.quality_counts(orders, weights, n)


def critical_counts(table, n, mmask):
    return backend.critical_counts(table, n, mmask)


def level_counts(table, n, mmask):
    return backend.level_counts(table, n, mmask)


def bp_critical_counts(table, n):
    return backend.bp_critical_counts(table, n)


def as_weights(numerators):
    """Pack integer numerators into int64 when the total fits, else object."""
    total = sum(numerators)
    if total < (1 << 62):
        return np.asarray(numerators, dtype=np.int64)
    return np.asarray(list(numerators), dtype=object)
