"""Distribution-free (structural) quantities for exchangeable lifetimes.

Under exchangeability ``q_j(A) = 1 / (n C(n-1, |A|))`` depends on A only
through its size, so every subset sum collapses to integer counts per level,
produced by the compiled kernels, times a rational weight. No ordering is
ever enumerated, which keeps these functions usable up to 24 components.

Alternative routes are cross-checked only when ``__debug__`` is true (the
default, i.e. when Python is not run with ``-O``).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import ComponentError, RouteDisagreement
from .lifetime import component_weight
from .signature import SubsignatureVector
from .structure import (
    DominationFunction,
    Polynomial,
    StructureFunction,
    from_domination,
    members,
    signed_domination,
    to_mask,
)

StructuralSubsignature = SubsignatureVector

_LITERAL_LIMIT = 14


def _check(name, *routes):
    first = tuple(routes[0])
    for other in routes[1:]:
        if tuple(other) != first:
            raise RouteDisagreement(f"{name}: {first} != {tuple(other)}")


def _module_mask(n: int, module) -> tuple[int, int]:
    mmask = to_mask(module, n)
    if mmask == 0:
        raise ComponentError("M must be nonempty")
    return mmask, mmask.bit_count()


def _critical_route(phi: StructureFunction, mmask: int, m: int) -> list[Fraction]:
    counts = _kernels.critical_counts(phi.table, phi.n, mmask)
    n = phi.n
    return [
        sum(
            (int(counts[a, k]) * component_weight(n, a) for a in range(n) if counts[a, k]),
            Fraction(0),
        )
        for k in range(1, m + 1)
    ]


def _level_route(phi: StructureFunction, mmask: int, m: int) -> list[Fraction]:
    """phi-level differences with weights (m-k+1)/(n C(n-1,|A|-1)) and k/(n C(n-1,|A|))."""
    n = phi.n
    levels = _kernels.level_counts(phi.table, n, mmask)
    out = []
    for k in range(1, m + 1):
        total = Fraction(0)
        for a in range(n + 1):
            if a >= 1 and levels[a, m - k + 1]:
                total += Fraction((m - k + 1) * int(levels[a, m - k + 1]), n * comb(n - 1, a - 1))
            if a <= n - 1 and levels[a, m - k]:
                total -= Fraction(k * int(levels[a, m - k]), n * comb(n - 1, a))
        out.append(total)
    return out


def _signed_route(phi: StructureFunction, mmask: int, m: int) -> list[Fraction]:
    """Literal signed phi-weighted sum over (j, A)."""
    n = phi.n
    sums = [Fraction(0)] * (m + 1)
    bits = [1 << (j - 1) for j in members(mmask)]
    for a in np.nonzero(phi.table)[0].tolist():
        missing = (mmask & ~a).bit_count()
        size = a.bit_count()
        for bit in bits:
            if a & bit:
                sums[missing + 1] += component_weight(n, size - 1)
            else:
                sums[missing] -= component_weight(n, size)
    return sums[1:]


def structural_subsignature(
    phi: StructureFunction, module: Iterable[int] | int, verify: bool = __debug__
) -> StructuralSubsignature:
    """Structural M-signature s_M by the critical-pair formula.

    With ``verify`` the signed phi-form and the level-difference form are
    evaluated too and must agree exactly. The signed form is evaluated
    literally up to 14 components.
    """
    mmask, m = _module_mask(phi.n, module)
    values = _critical_route(phi, mmask, m)
    if verify:
        routes = [values, _level_route(phi, mmask, m)]
        if phi.n <= _LITERAL_LIMIT:
            routes.append(_signed_route(phi, mmask, m))
        _check("structural subsignature", *routes)
    return SubsignatureVector(members(mmask), tuple(values))


def structural_signature(phi: StructureFunction, verify: bool = __debug__) -> tuple[Fraction, ...]:
    """Structural signature s_1..s_n."""
    n = phi.n
    values = structural_subsignature(phi, phi.full, verify=False).values
    if verify:
        levels = _kernels.level_counts(phi.table, n, phi.full).sum(axis=1)
        boland = tuple(
            Fraction(int(levels[n - k + 1]), comb(n, n - k + 1))
            - Fraction(int(levels[n - k]), comb(n, n - k))
            for k in range(1, n + 1)
        )
        _check("structural signature", values, boland)
    return values


def structural_bp(phi: StructureFunction) -> tuple[Fraction, ...]:
    """Structural importance b_j = Pr(T_C = T_j) under exchangeability."""
    n = phi.n
    counts = _kernels.bp_critical_counts(phi.table, n)
    return tuple(
        sum((int(counts[j, a]) * component_weight(n, a) for a in range(n)), Fraction(0))
        for j in range(n)
    )


def _domination_weight(m: int, n: int, k: int, missing: int, size: int) -> Fraction:
    """(m - |M\\A|)/k * C(|M\\A|, k-1) / C(|M\\A| + |A|, k)."""
    return Fraction((m - missing) * comb(missing, k - 1), k * comb(missing + size, k))


def structural_subsignature_domination(
    d: DominationFunction, module: Iterable[int] | int, restricted: bool | None = None
) -> StructuralSubsignature:
    """s_M from signed domination coefficients.

    The full sum over A and the sum restricted to ``k-1 <= |M\\A| <= m-1`` are
    both computed and must agree.
    """
    from_domination(d)
    mmask, m = _module_mask(d.n, module)
    full = [Fraction(0)] * m
    limited = [Fraction(0)] * m
    for a, coef in d.coeffs.items():
        missing = (mmask & ~a).bit_count()
        size = a.bit_count()
        for k in range(1, m + 1):
            term = coef * _domination_weight(m, d.n, k, missing, size)
            full[k - 1] += term
            if k - 1 <= missing <= m - 1:
                limited[k - 1] += term
    _check("structural domination full vs restricted", full, limited)
    return SubsignatureVector(members(mmask), tuple(limited if restricted else full))


def structural_sig_domination(d: DominationFunction) -> tuple[Fraction, ...]:
    """s_k = sum over |A| <= n-k+1 of d(A) |A|/k C(n-|A|, k-1)/C(n, k)."""
    from_domination(d)
    n = d.n
    out = []
    for k in range(1, n + 1):
        total = Fraction(0)
        for a, coef in d.coeffs.items():
            size = a.bit_count()
            if size <= n - k + 1:
                total += coef * Fraction(size * comb(n - size, k - 1), k * comb(n, k))
        out.append(total)
    return tuple(out)


def structural_bp_domination(d: DominationFunction) -> tuple[Fraction, ...]:
    """b_j = sum over A containing j of d(A) / |A|."""
    from_domination(d)
    out = [Fraction(0)] * d.n
    for a, coef in d.coeffs.items():
        size = a.bit_count()
        for j in members(a):
            out[j - 1] += Fraction(coef, size)
    return tuple(out)


def beta_integral(p: int, q: int) -> Fraction:
    """Integral of t^p (1-t)^q over [0, 1]."""
    if p < 0 or q < 0:
        raise ValueError("exponents must be nonnegative")
    return Fraction(1, (p + q + 1) * comb(p + q, p))


def integrate_polynomial(poly: Polynomial, weight: tuple[int, int] | None = None) -> Fraction:
    """Exact integral over [0, 1], optionally against the Beta(m-k+1, k) density.

    ``weight=(k, m)`` multiplies by r_{k,m}(t) = t^(m-k) (1-t)^(k-1) / B(m-k+1, k).
    """
    if weight is None:
        return sum((c * beta_integral(p, 0) for p, c in enumerate(poly.coeffs)), Fraction(0))
    k, m = weight
    if not 1 <= k <= m:
        raise ValueError(f"weight needs 1 <= k <= m, got k={k}, m={m}")
    norm = beta_integral(m - k, k - 1)
    total = sum(
        (c * beta_integral(p + m - k, k - 1) for p, c in enumerate(poly.coeffs)), Fraction(0)
    )
    return total / norm


def order_stat_min_closed_form(m: int, k: int, inside: int, outside: int) -> Fraction:
    """Exchangeable Pr(T_{k:M} = min_A T_i) with |A & M| = inside, |A \\ M| = outside."""
    return Fraction(inside, m + outside) * Fraction(
        comb(m - inside, k - 1), comb(m + outside - 1, k - 1)
    )


def structural_summary(phi: StructureFunction) -> dict:
    """Signature, importance and domination-route checks in one call."""
    d = signed_domination(phi)
    sig = structural_signature(phi)
    bp = structural_bp(phi)
    _check("signature via domination", sig, structural_sig_domination(d))
    _check("importance via domination", bp, structural_bp_domination(d))
    return {"signature": sig, "bp": bp}
