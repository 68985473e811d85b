"""Subsignatures of modular sets.

A :class:`~subsig.structure.ModuleDecomposition` ``(M, chi, psi)`` expresses
the system as ``psi(chi(x^M), x^(C \\ M))``. This module relates ``p_M`` to
the module's own signature ``p^M`` and to the organizing structure ``psi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels
from ._kernels._numpy import suffix_masks
from .errors import AssumptionViolated, ComponentError, RouteDisagreement
from .lifetime import OrderingDistribution
from .signature import (
    SubsignatureVector,
    failure_attribution,
    subsignature_direct,
    subsignature_oracle,
)
from .structural import integrate_polynomial, structural_signature
from .structure import (
    ModuleDecomposition,
    StructureFunction,
    members,
    reliability_partial_diagonal,
    to_mask,
)


@dataclass(frozen=True)
class ReducedQualityFunction:
    """Relative quality of the macro-component: A ranges over subsets of C \\ M.

    Keys of ``values`` are masks over the original labels.
    """

    n: int
    module: tuple[int, ...]
    values: dict[int, Fraction]

    def __call__(self, components) -> Fraction:
        return self.values.get(to_mask(components, self.n), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))


@dataclass(frozen=True)
class FactorizationReport:
    """Outcome of the ratio test behind the module factorization.

    ``factors[k - 1]`` is the conditional factor for the k-th module failure,
    or ``None`` when no admissible (j, A) exists at that level. ``witness`` is
    ``(j, A, j2, A2, B)`` with both ratios when the test fails.
    """

    holds: bool
    factors: tuple[Fraction | None, ...] = ()
    witness: tuple | None = None
    ratios: dict = field(default_factory=dict, repr=False, compare=False)


def module_lifetime_position(chi: StructureFunction, order: Sequence[int]) -> int:
    """Which failure (1..m) among the module's components kills the module.

    ``order`` lists chi's components (1..m) from first to last failure.
    """
    if sorted(order) != list(range(1, chi.n + 1)):
        raise ComponentError(f"{list(order)} is not an ordering of 1..{chi.n}")
    row = np.array([[c - 1 for c in order]], dtype=np.int8)
    return int(_kernels.killing_positions(row, chi.table)[0]) + 1


def _module_failure_index(dist: OrderingDistribution, dec: ModuleDecomposition) -> np.ndarray:
    """Global failure index of T_M in every ordering of the support."""
    orders = dist.orders.astype(np.int64)
    mm = np.array(dec.module) - 1
    local = np.full(dist.n, -1, dtype=np.int64)
    local[mm] = np.arange(dec.m)
    mapped = local[orders]
    in_m = mapped >= 0
    restricted = mapped[in_m].reshape(len(orders), dec.m).astype(np.int8)
    kth = _kernels.killing_positions(restricted, dec.chi.table)
    # position of the (kth+1)-st module component in the full ordering
    rank = np.cumsum(in_m, axis=1)
    hit = in_m & (rank == (kth + 1)[:, None])
    return np.argmax(hit, axis=1)


def reduced_quality(dist: OrderingDistribution, dec: ModuleDecomposition) -> ReducedQualityFunction:
    """q_[M](A) = Pr(components of C \\ M outliving T_M are exactly A)."""
    dec.require_valid()
    dist._require_explicit()
    idx = _module_failure_index(dist, dec)
    alive = suffix_masks(dist.orders)
    after = alive[np.arange(len(idx)), idx + 1] & ~dec.mask
    acc: dict[int, int] = {}
    for a, w in zip(after.tolist(), dist.numerators):
        acc[a] = acc.get(a, 0) + w
    values = {a: Fraction(w, dist.denominator) for a, w in acc.items()}
    return ReducedQualityFunction(dist.n, dec.module, values)


def module_attribution(dist: OrderingDistribution, dec: ModuleDecomposition) -> Fraction:
    """Pr(T_C = T_M): sum of q_[M](A) over A for which [M] is critical in psi."""
    dec.require_valid()
    if dist.is_exchangeable:
        # no reduced law to enumerate; T_C = T_M is the event "the fatal failure is in M"
        return failure_attribution(dec.composed(), dist, dec.mask)
    rq = reduced_quality(dist, dec)
    macro_bit = 1 << (dec.macro - 1)
    psi = dec.psi.table
    total = Fraction(0)
    for a, value in rq.values.items():
        b = dec.to_reduced(a)
        if not psi[b] and psi[b | macro_bit]:
            total += value
    return total


def module_signature(
    chi: StructureFunction, dist: OrderingDistribution, module: Sequence[int]
) -> SubsignatureVector:
    """Signature of the module as a standalone system, p_k^M = Pr(T_M = T_{k:M})."""
    module = tuple(sorted(module))
    if len(module) != chi.n:
        raise ComponentError(f"chi has {chi.n} components but |M| = {len(module)}")
    marginal = dist.marginal(module)
    if marginal.is_exchangeable:
        values = structural_signature(chi)
    else:
        values = subsignature_oracle(chi, marginal, chi.full).values
    return SubsignatureVector(module, tuple(values))


def _exchangeable_ratio(n: int, m: int, k: int, b: int) -> Fraction:
    """q_j(A + B) / q_j^M(A) = m C(m-1, m-k) / (n C(n-1, m-k+|B|)) when |A| = m-k."""
    return Fraction(m * comb(m - 1, m - k), n * comb(n - 1, m - k + b))


def _outside_subsets(dec: ModuleDecomposition):
    rest = [c for c in range(1, dec.n + 1) if c not in dec.module]
    for r in range(1 << len(rest)):
        yield sum(1 << (rest[i] - 1) for i in range(len(rest)) if r >> i & 1)


def factorization_check(dist: OrderingDistribution, dec: ModuleDecomposition) -> FactorizationReport:
    """Decide whether q_j(A + B) / q_j^M(A) depends only on (|A|, B).

    When it does, the factor for level k sums that common ratio (|A| = m - k)
    against the critical indicator of [M] in psi. Exchangeable laws pass by
    the closed-form ratio.
    """
    dec.require_valid()
    n, m = dec.n, dec.m
    macro_bit = 1 << (dec.macro - 1)
    psi = dec.psi.table

    def critical(b):
        r = dec.to_reduced(b)
        return not psi[r] and psi[r | macro_bit]

    outside = list(_outside_subsets(dec))
    if dist.is_exchangeable:
        factors = tuple(
            sum(
                (_exchangeable_ratio(n, m, k, b.bit_count()) for b in outside if critical(b)),
                Fraction(0),
            )
            for k in range(1, m + 1)
        )
        return FactorizationReport(True, factors)

    local = dist.marginal(dec.module)
    labels = dec.module
    ratios: dict[tuple[int, int], Fraction] = {}
    owners: dict[tuple[int, int], tuple] = {}
    for jl in range(1, m + 1):
        j = labels[jl - 1]
        others = [i for i in range(1, m + 1) if i != jl]
        for r in range(1 << len(others)):
            a_local = sum(1 << (others[i] - 1) for i in range(len(others)) if r >> i & 1)
            qm = local.q_component(jl, a_local)
            if qm == 0:
                continue
            a_mask = sum(1 << (labels[i - 1] - 1) for i in members(a_local))
            for b in outside:
                ratio = dist.q_component(j, a_mask | b) / qm
                key = (a_local.bit_count(), b)
                where = (j, members(a_mask), members(b))
                if key not in ratios:
                    ratios[key] = ratio
                    owners[key] = where
                elif ratios[key] != ratio:
                    first = owners[key]
                    witness = (
                        first[0], first[1], where[0], where[1], first[2],
                        ratios[key], ratio,
                    )
                    return FactorizationReport(False, witness=witness, ratios=ratios)
    factors = []
    for k in range(1, m + 1):
        level = m - k
        if not any(key[0] == level for key in ratios):
            factors.append(None)
            continue
        factors.append(
            sum((ratios[(level, b)] for b in outside if critical(b)), Fraction(0))
        )
    return FactorizationReport(True, tuple(factors), ratios=ratios)


def subsignature_via_module(
    dist: OrderingDistribution, dec: ModuleDecomposition
) -> SubsignatureVector:
    """p_M^(k) = p_k^M times the conditional factor of level k."""
    report = factorization_check(dist, dec)
    if not report.holds:
        raise AssumptionViolated(report.witness)
    sig = module_signature(dec.chi, dist, dec.module)
    values = []
    for pk, factor in zip(sig.values, report.factors):
        values.append(Fraction(0) if pk == 0 or factor is None else pk * factor)
    return SubsignatureVector(dec.module, tuple(values))


def conditional_importance(
    dist: OrderingDistribution, dec: ModuleDecomposition
) -> tuple[Fraction | None, ...]:
    """Pr(T_C = T_{k:M} | T_M = T_{k:M}) = p_M^(k) / p_k^M, None where p_k^M = 0."""
    phi = dec.composed()
    p = subsignature_direct(phi, dist, dec.mask).values
    pm = module_signature(dec.chi, dist, dec.module).values
    return tuple(None if b == 0 else a / b for a, b in zip(p, pm))


def exchangeable_module_attribution(dec: ModuleDecomposition) -> Fraction:
    """Integral over [0, 1] of the psi-derivative in [M] along the diagonal.

    Equals the attribution sum with the reduced quality weights
    1 / ((n-m+1) C(n-m, |B|)) substituted, which is checked here.
    """
    poly = reliability_partial_diagonal(dec.psi, dec.macro)
    value = integrate_polynomial(poly)
    if __debug__:
        nr = dec.psi.n
        macro_bit = 1 << (dec.macro - 1)
        psi = dec.psi.table
        direct = sum(
            (
                Fraction(1, nr * comb(nr - 1, b.bit_count()))
                for b in range(1 << nr)
                if not b & macro_bit and not psi[b] and psi[b | macro_bit]
            ),
            Fraction(0),
        )
        if direct != value:
            raise RouteDisagreement(f"module attribution integral {value} != {direct}")
    return value


def exchangeable_module_subsignature(dec: ModuleDecomposition) -> SubsignatureVector:
    """s_M^(k) = s_k^M times the Beta(m-k+1, k)-weighted integral of the psi-derivative."""
    poly = reliability_partial_diagonal(dec.psi, dec.macro)
    sig = structural_signature(dec.chi)
    m = dec.m
    values = tuple(
        sig[k - 1] * integrate_polynomial(poly, (k, m)) if sig[k - 1] else Fraction(0)
        for k in range(1, m + 1)
    )
    return SubsignatureVector(dec.module, values)
