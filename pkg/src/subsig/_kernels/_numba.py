"""numba-compiled loop kernels, mirroring ``_numpy`` one for one.

Only the int64 weight path is compiled; object-dtype weights are routed to
the numpy twins by the dispatcher.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def popcounts(n):
    size = 1 << n
    pc = np.zeros(size, dtype=np.int64)
    for a in range(1, size):
        pc[a] = pc[a >> 1] + (a & 1)
    return pc


@njit(cache=True)
def _mobius(out, n):
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for a in range(size):
            if a & bit:
                out[a] -= out[a ^ bit]
    return out


def mobius(values, n):
    return _mobius(np.array(values, dtype=np.int64, copy=True), n)


@njit(cache=True)
def _zeta(out, n):
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for a in range(size):
            if a & bit:
                out[a] += out[a ^ bit]
    return out


def zeta(values, n):
    return _zeta(np.array(values, dtype=np.int64, copy=True), n)


@njit(cache=True)
def _monotone_witness(table, n):
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for a in range(size):
            if not a & bit and table[a] > table[a | bit]:
                return a, a | bit
    return -1, -1


def monotone_witness(table, n):
    a, b = _monotone_witness(table, n)
    return int(a), int(b)


@njit(cache=True)
def killing_positions(orders, table):
    k, n = orders.shape
    out = np.zeros(k, dtype=np.int64)
    for r in range(k):
        alive = 0
        for i in range(n):
            alive |= 1 << orders[r, i]
        for i in range(n):
            alive ^= 1 << orders[r, i]
            if table[alive] == 0:
                out[r] = i
                break
    return out


@njit(cache=True)
def _quality_counts(orders, weights, n):
    k = orders.shape[0]
    q = np.zeros(1 << n, dtype=np.int64)
    qj = np.zeros((n, 1 << n), dtype=np.int64)
    for r in range(k):
        w = weights[r]
        alive = 0
        for i in range(n):
            alive |= 1 << orders[r, i]
        q[alive] += w
        for i in range(n):
            j = orders[r, i]
            alive ^= 1 << j
            qj[j, alive] += w
            q[alive] += w
    return q, qj


def quality_counts(orders, weights, n):
    return _quality_counts(orders, weights, n)


@njit(cache=True)
def _bitcount(a):
    c = 0
    while a:
        a &= a - 1
        c += 1
    return c


@njit(cache=True)
def _critical_counts(table, n, mmask):
    m = _bitcount(mmask)
    pc = popcounts(n)
    counts = np.zeros((n + 1, m + 1), dtype=np.int64)
    for a in range(1 << n):
        if table[a]:
            continue
        missing = m - pc[a & mmask]
        for j in range(n):
            bit = 1 << j
            if mmask & bit and not a & bit and table[a | bit]:
                counts[pc[a], missing] += 1
    return counts


def critical_counts(table, n, mmask):
    return _critical_counts(table, n, mmask)


@njit(cache=True)
def _level_counts(table, n, mmask):
    m = _bitcount(mmask)
    pc = popcounts(n)
    counts = np.zeros((n + 1, m + 1), dtype=np.int64)
    for a in range(1 << n):
        if table[a]:
            counts[pc[a], pc[a & mmask]] += 1
    return counts


def level_counts(table, n, mmask):
    return _level_counts(table, n, mmask)


@njit(cache=True)
def bp_critical_counts(table, n):
    pc = popcounts(n)
    counts = np.zeros((n, n), dtype=np.int64)
    for a in range(1 << n):
        if table[a]:
            continue
        for j in range(n):
            bit = 1 << j
            if not a & bit and table[a | bit]:
                counts[j, pc[a]] += 1
    return counts
