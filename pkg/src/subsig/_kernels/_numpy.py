"""Vectorized numpy implementations of the subset/ordering kernels.

Every function here has a twin in ``_numba`` with the same signature and
results. Weight arrays may be ``int64`` or ``object`` (Python ints); the
object path is what keeps exact arithmetic when common denominators do not
fit in 64 bits.
"""

import numpy as np


def popcounts(n):
    masks = np.arange(1 << n, dtype=np.int64)
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc += (masks >> i) & 1
    return pc


def mobius(values, n):
    """Signed subset-difference transform, returns a new int64 array."""
    out = np.array(values, dtype=np.int64, copy=True)
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return out


def zeta(values, n):
    out = np.array(values, dtype=np.int64, copy=True)
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return out


def monotone_witness(table, n):
    """Return ``(A, B)`` with A a proper subset of B and table[A] > table[B], or (-1, -1)."""
    masks = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        lower = masks[(masks & bit) == 0]
        bad = np.nonzero(table[lower] > table[lower | bit])[0]
        if bad.size:
            a = int(lower[bad[0]])
            return a, a | bit
    return -1, -1


def suffix_masks(orders):
    """Masks of the components still alive after each failure.

    Column ``i`` is the set ``{orders[:, i], ..., orders[:, n-1]}`` and column
    ``n`` is empty.
    """
    k, n = orders.shape
    out = np.zeros((k, n + 1), dtype=np.int64)
    bits = np.left_shift(np.int64(1), orders.astype(np.int64))
    for i in range(n - 1, -1, -1):
        out[:, i] = out[:, i + 1] | bits[:, i]
    return out


def killing_positions(orders, table):
    """Index in each ordering of the failure that brings the system down."""
    if orders.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    alive = suffix_masks(orders)[:, 1:]
    down = table[alive] == 0
    return np.argmax(down, axis=1).astype(np.int64)


def quality_counts(orders, weights, n):
    """Accumulate ordering weights into q(A) and q_j(A) numerators.

    ``q[A]`` sums weights of orderings whose last ``|A|`` components are A;
    ``qj[j, A]`` those where j fails right before the components of A.
    """
    dtype = weights.dtype
    q = np.zeros(1 << n, dtype=dtype)
    qj = np.zeros((n, 1 << n), dtype=dtype)
    if dtype == object:
        q[:] = 0
        qj[:] = 0
    if orders.shape[0] == 0:
        return q, qj
    alive = suffix_masks(orders)
    for i in range(n + 1):
        np.add.at(q, alive[:, i], weights)
    for i in range(n):
        np.add.at(qj, (orders[:, i].astype(np.int64), alive[:, i + 1]), weights)
    return q, qj


def critical_counts(table, n, mmask):
    """Counts of critical pairs (j, A), j in M\\A, indexed by (|A|, |M\\A|)."""
    m = bin(mmask).count("1")
    pc = popcounts(n)
    masks = np.arange(1 << n, dtype=np.int64)
    out_m = pc[masks & mmask]
    counts = np.zeros((n + 1, m + 1), dtype=np.int64)
    for j in range(n):
        bit = 1 << j
        if not mmask & bit:
            continue
        lower = masks[(masks & bit) == 0]
        crit = (table[lower | bit] == 1) & (table[lower] == 0)
        sel = lower[crit]
        np.add.at(counts, (pc[sel], m - out_m[sel]), 1)
    return counts


def level_counts(table, n, mmask):
    """Number of A with table[A] = 1, indexed by (|A|, |M & A|)."""
    m = bin(mmask).count("1")
    pc = popcounts(n)
    masks = np.arange(1 << n, dtype=np.int64)
    up = masks[table == 1]
    counts = np.zeros((n + 1, m + 1), dtype=np.int64)
    np.add.at(counts, (pc[up], pc[up & mmask]), 1)
    return counts


def bp_critical_counts(table, n):
    """Counts of A not containing j with j critical for A, indexed by (j, |A|)."""
    pc = popcounts(n)
    masks = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        bit = 1 << j
        lower = masks[(masks & bit) == 0]
        crit = (table[lower | bit] == 1) & (table[lower] == 0)
        counts[j] = np.bincount(pc[lower[crit]], minlength=n)[:n]
    return counts
