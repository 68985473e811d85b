"""Subsignatures, probability signatures and Barlow-Proschan indices.

``p_M^(k)`` is the probability that the k-th failure among the components of
M is the one that brings the system down. It is computed here by a
definitional walk over failure orderings (:func:`subsignature_oracle`) and by
four closed-form linear expressions, all in exact rational arithmetic:

* :func:`subsignature_direct` - critical pairs weighted by ``q_j``;
* :func:`subsignature_phi_weighted` - signed ``q_j``-weighted sum of phi;
* :func:`subsignature_updown` - level sums of phi weighted by ``q_M^down``
  and ``q_M^up``;
* :func:`subsignature_domination` - signed domination coefficients weighted
  by ``Pr(T_{k:M} = min_A T_i)``.

``k`` is 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import ComponentError, NormalizationUndefined, RouteDisagreement
from .lifetime import OrderingDistribution
from .structure import (
    DominationFunction,
    StructureFunction,
    from_domination,
    members,
    signed_domination,
    to_mask,
)


@dataclass(frozen=True)
class SubsignatureVector:
    """``values[k - 1]`` is ``p_M^(k)`` for the sorted component tuple ``module``."""

    module: tuple[int, ...]
    values: tuple[Fraction, ...]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def coordinate(self, k: int) -> Fraction:
        if not 1 <= k <= len(self.values):
            raise IndexError(f"k = {k} outside 1..{len(self.values)}")
        return self.values[k - 1]

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


@dataclass(frozen=True)
class BarlowProschanVector:
    """``values[j - 1]`` is Pr(T_C = T_j)."""

    values: tuple[Fraction, ...]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def component(self, j: int) -> Fraction:
        return self.values[j - 1]


def _setup(phi: StructureFunction, dist: OrderingDistribution, module) -> tuple[int, int]:
    if dist.n != phi.n:
        raise ComponentError(f"structure has {phi.n} components, distribution {dist.n}")
    mmask = to_mask(module, phi.n)
    if mmask == 0:
        raise ComponentError("M must be nonempty")
    return mmask, mmask.bit_count()


def _vector(mmask: int, sums, scale) -> SubsignatureVector:
    return SubsignatureVector(members(mmask), tuple(Fraction(s) / scale for s in sums))


def _agree(name: str, *routes):
    first = routes[0]
    for other in routes[1:]:
        if tuple(other) != tuple(first):
            raise RouteDisagreement(f"{name}: {tuple(first)} != {tuple(other)}")


def subsignature_oracle(
    phi: StructureFunction, dist: OrderingDistribution, module: Iterable[int] | int
) -> SubsignatureVector:
    """Definitional p_M^(k): replay every ordering and find the fatal failure."""
    mmask, m = _setup(phi, dist, module)
    dist._require_explicit()
    orders = dist.orders.astype(np.int64)
    kill = _kernels.killing_positions(dist.orders, phi.table)
    in_m = (mmask >> orders) & 1
    rank = np.cumsum(in_m, axis=1)
    rows = np.arange(len(orders))
    killer_in_m = in_m[rows, kill] == 1
    k_of = np.where(killer_in_m, rank[rows, kill], 0)
    sums = np.zeros(m + 1, dtype=dist.weights.dtype)
    if dist.weights.dtype == object:
        sums[:] = 0
    np.add.at(sums, k_of, dist.weights)
    return _vector(mmask, [int(s) for s in sums[1:]], dist.denominator)


def subsignature_direct(
    phi: StructureFunction, dist: OrderingDistribution, module: Iterable[int] | int
) -> SubsignatureVector:
    """Sum of q_j(A) over critical pairs (j, A) with j in M \\ A and |M \\ A| = k."""
    mmask, m = _setup(phi, dist, module)
    table = phi.table.tobytes()
    sums = [0] * (m + 1)
    mj = [(j - 1, 1 << (j - 1)) for j in members(mmask)]
    for a in np.nonzero(phi.table == 0)[0].tolist():
        k = (mmask & ~a).bit_count()
        for j0, bit in mj:
            if not a & bit and table[a | bit]:
                sums[k] += dist._qj_raw(j0, a)
    return _vector(mmask, sums[1:], dist.scale)


def subsignature_phi_weighted(
    phi: StructureFunction, dist: OrderingDistribution, module: Iterable[int] | int
) -> SubsignatureVector:
    """Signed sum of q_j(A - j) phi(A), the sign being + when j is in A."""
    mmask, m = _setup(phi, dist, module)
    sums = [0] * (m + 1)
    mj = [(j - 1, 1 << (j - 1)) for j in members(mmask)]
    for a in np.nonzero(phi.table)[0].tolist():
        missing = (mmask & ~a).bit_count()
        for j0, bit in mj:
            if a & bit:
                sums[missing + 1] += dist._qj_raw(j0, a ^ bit)
            else:
                sums[missing] -= dist._qj_raw(j0, a)
    return _vector(mmask, sums[1:], dist.scale)


def subsignature_updown(
    phi: StructureFunction, dist: OrderingDistribution, module: Iterable[int] | int
) -> SubsignatureVector:
    """Level sums: q_M^down over |M & A| = m-k+1 minus q_M^up over |M & A| = m-k."""
    mmask, m = _setup(phi, dist, module)
    sums = [0] * (m + 1)
    scale = dist.scale
    for a in np.nonzero(phi.table)[0].tolist():
        c = (mmask & a).bit_count()
        if c >= 1:
            sums[m - c + 1] += dist.q_down(mmask, a) * scale
        if c <= m - 1:
            sums[m - c] -= dist.q_up(mmask, a) * scale
    return _vector(mmask, sums[1:], scale)


def subsignature_domination(
    d: DominationFunction,
    dist: OrderingDistribution,
    module: Iterable[int] | int,
    restricted: bool | None = None,
) -> SubsignatureVector:
    """Sum of d(A) Pr(T_{k:M} = min_A T_i).

    Both the full sum and the one restricted to ``|M & A| <= m - k + 1`` are
    evaluated and must agree; ``restricted`` picks which one is returned
    (``None`` returns the full sum after the comparison).
    """
    from_domination(d)
    if dist.n != d.n:
        raise ComponentError(f"domination has {d.n} components, distribution {dist.n}")
    mmask = to_mask(module, d.n)
    if mmask == 0:
        raise ComponentError("M must be nonempty")
    m = mmask.bit_count()
    full = [Fraction(0)] * m
    limited = [Fraction(0)] * m
    for a, coef in d.coeffs.items():
        if a == 0:
            continue
        c = (mmask & a).bit_count()
        for k in range(1, m + 1):
            term = coef * dist.order_stat_min_prob(mmask, k, a)
            full[k - 1] += term
            if c <= m - k + 1:
                limited[k - 1] += term
    _agree("domination full vs restricted", full, limited)
    values = limited if restricted else full
    return SubsignatureVector(members(mmask), tuple(values))


def subsignature(
    phi: StructureFunction, dist: OrderingDistribution, module: Iterable[int] | int
) -> SubsignatureVector:
    """The M-signature, by the critical-pair formula."""
    return subsignature_direct(phi, dist, module)


def probability_signature(phi: StructureFunction, dist: OrderingDistribution) -> SubsignatureVector:
    """Signature (M = C), computed by q-level differences and by critical pairs."""
    n = phi.n
    if dist.n != n:
        raise ComponentError(f"structure has {n} components, distribution {dist.n}")
    levels = [0] * (n + 1)
    for a in np.nonzero(phi.table)[0].tolist():
        levels[a.bit_count()] += dist._q_raw(a)
    scale = dist.scale
    by_levels = tuple(
        Fraction(levels[n - k + 1] - levels[n - k]) / scale for k in range(1, n + 1)
    )
    direct = subsignature_direct(phi, dist, phi.full)
    _agree("signature level vs critical", by_levels, direct.values)
    return direct


def barlow_proschan(phi: StructureFunction, dist: OrderingDistribution) -> BarlowProschanVector:
    """Pr(T_C = T_j) for every j, by critical pairs and by the domination route."""
    if dist.n != phi.n:
        raise ComponentError(f"structure has {phi.n} components, distribution {dist.n}")
    direct = tuple(subsignature_direct(phi, dist, 1 << j).values[0] for j in range(phi.n))
    d = signed_domination(phi)
    via_d = []
    for j in range(phi.n):
        total = Fraction(0)
        for a, coef in d.coeffs.items():
            if a >> j & 1:
                total += coef * dist.order_stat_min_prob(1 << j, 1, a)
        via_d.append(total)
    _agree("Barlow-Proschan critical vs domination", direct, via_d)
    return BarlowProschanVector(direct)


def failure_attribution(
    phi: StructureFunction, dist: OrderingDistribution, module: Iterable[int] | int
) -> Fraction:
    """Pr(T_C = T_j for some j in M)."""
    mmask, _ = _setup(phi, dist, module)
    table = phi.table.tobytes()
    total = 0
    mj = [(j - 1, 1 << (j - 1)) for j in members(mmask)]
    for a in np.nonzero(phi.table == 0)[0].tolist():
        for j0, bit in mj:
            if not a & bit and table[a | bit]:
                total += dist._qj_raw(j0, a)
    return Fraction(total) / dist.scale


def normalized_subsignature(
    phi: StructureFunction, dist: OrderingDistribution, module: Iterable[int] | int
) -> tuple[Fraction, ...]:
    """p_M^(k) divided by the attribution probability of M."""
    vec = subsignature_direct(phi, dist, module)
    total = vec.total()
    if total == 0:
        raise NormalizationUndefined(f"no failure of M = {vec.module} can bring the system down")
    return tuple(v / total for v in vec.values)
