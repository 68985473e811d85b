"""Semicoherent structure functions and their transforms.

Components are labelled ``1..n``. A set of components is a Python ``int``
bitmask with bit ``i - 1`` standing for component ``i``; public functions
accept any iterable of labels and convert with :func:`to_mask`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import _kernels, formula
from .errors import CapacityError, ComponentError, DecompositionError, NotBinaryError

MAX_COMPONENTS = 24


# -- component sets ---------------------------------------------------------


def to_mask(components: Iterable[int] | int, n: int) -> int:
    """Bitmask of ``components``; an ``int`` argument is taken as a mask already."""
    if isinstance(components, (int, np.integer)):
        mask = int(components)
        if mask < 0 or mask >> n:
            raise ComponentError(f"mask {mask:#b} has bits outside 1..{n}")
        return mask
    mask = 0
    for c in components:
        if not 1 <= c <= n:
            raise ComponentError(f"component {c} outside 1..{n}")
        mask |= 1 << (c - 1)
    return mask


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_COMPONENTS:
        raise CapacityError(f"n = {n} outside the supported range 1..{MAX_COMPONENTS}")


def _project(masks: np.ndarray, labels: Sequence[int]) -> np.ndarray:
    """Re-index bits: bit ``i`` of the result is bit ``labels[i] - 1`` of ``masks``."""
    out = np.zeros_like(masks)
    for i, label in enumerate(labels):
        out |= ((masks >> (label - 1)) & 1) << i
    return out


def _spread(local: np.ndarray, labels: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`_project`."""
    out = np.zeros_like(local)
    for i, label in enumerate(labels):
        out |= ((local >> i) & 1) << (label - 1)
    return out


# -- structure functions ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class StructureFunction:
    """A Boolean set function on ``n`` components, stored as a full truth table.

    ``table[A]`` is the system state when exactly the components in the mask
    ``A`` work. Construction does not check semicoherence; use
    :func:`validate_semicoherent`.
    """

    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_n(self.n)
        table = np.ascontiguousarray(self.table, dtype=np.uint8)
        if table.shape != (1 << self.n,):
            raise ValueError(f"table must have length 2**{self.n}")
        if table.max(initial=0) > 1:
            raise ValueError("table entries must be 0 or 1")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_formula(cls, expr: str, n: int, labels: Sequence[int] | None = None):
        return parse_structure(expr, n, labels)

    @classmethod
    def from_path_sets(cls, path_sets: Iterable[Iterable[int]], n: int):
        """phi(A) = 1 iff A contains one of the given path sets."""
        _check_n(n)
        paths = [to_mask(p, n) for p in path_sets]
        table = np.zeros(1 << n, dtype=np.int64)
        for p in paths:
            table[p] = 1
        table = np.minimum(_kernels.zeta(table, n), 1)
        return cls(n, table.astype(np.uint8))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def value(self, mask: int) -> int:
        return int(self.table[mask])

    def __call__(self, components: Iterable[int] | int) -> int:
        return int(self.table[to_mask(components, self.n)])

    def __eq__(self, other):
        if not isinstance(other, StructureFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def path_sets(self) -> list[tuple[int, ...]]:
        """Minimal path sets, ordered by size then lexicographically."""
        up = np.nonzero(self.table)[0]
        minimal = []
        for a in up.tolist():
            if all(not self.table[a & ~(1 << i)] for i in range(self.n) if a >> i & 1):
                minimal.append(members(a))
        return sorted(minimal, key=lambda s: (len(s), s))


def parse_structure(expr: str, n: int, labels: Sequence[int] | None = None) -> StructureFunction:
    """Truth table of a formula in the monotone DSL.

    ``labels`` renames the variables: with ``labels=[3, 4]`` the formula
    ``x3 & x4`` builds a 2-component function whose component 1 is ``x3``.
    """
    if n > MAX_COMPONENTS:
        raise CapacityError(f"n = {n} exceeds the cap of {MAX_COMPONENTS} components")
    _check_n(n)
    labels = list(range(1, n + 1)) if labels is None else list(labels)
    if len(labels) != n:
        raise ValueError("need exactly n labels")
    tree = formula.parse(expr)
    masks = np.arange(1 << n, dtype=np.int64)
    values = formula.evaluate(tree, masks, labels)
    return StructureFunction(n, values.astype(np.uint8))


def series(n: int) -> StructureFunction:
    table = np.zeros(1 << n, dtype=np.uint8)
    table[-1] = 1
    return StructureFunction(n, table)


def parallel(n: int) -> StructureFunction:
    table = np.ones(1 << n, dtype=np.uint8)
    table[0] = 0
    return StructureFunction(n, table)


def k_out_of_n(k: int, n: int) -> StructureFunction:
    """Works iff at least ``k`` of the ``n`` components work."""
    pc = _kernels.popcounts(n)
    return StructureFunction(n, (pc >= k).astype(np.uint8))


def indicator_structure(components: Iterable[int] | int, n: int) -> StructureFunction:
    """phi_A(B) = 1 iff A is a subset of B; the lifetime is min over A."""
    a = to_mask(components, n)
    if a == 0:
        raise ComponentError("indicator structure needs a nonempty set")
    masks = np.arange(1 << n, dtype=np.int64)
    return StructureFunction(n, ((masks & a) == a).astype(np.uint8))


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [v.message for v in self.violations]


def validate_semicoherent(phi: StructureFunction) -> ValidationReport:
    """Every violated condition of semicoherence; an empty report means valid."""
    found = []
    if phi.table[0] != 0:
        found.append(Violation("empty", f"phi(empty)={phi.table[0]}"))
    if phi.table[phi.full] != 1:
        found.append(Violation("full", f"phi(C)={phi.table[phi.full]}"))
    a, b = _kernels.monotone_witness(phi.table, phi.n)
    if a >= 0:
        wa, wb = members(a), members(b)
        found.append(
            Violation(
                "monotone",
                f"phi({set(wa) or '{}'})=1 > phi({set(wb)})=0",
                (wa, wb),
            )
        )
    return ValidationReport(tuple(found))


def delta(phi: StructureFunction, j: int, components: Iterable[int] | int) -> int:
    """Discrete derivative phi(A + j) - phi(A); 1 iff j is critical for A."""
    a = to_mask(components, phi.n)
    if not 1 <= j <= phi.n:
        raise ComponentError(f"component {j} outside 1..{phi.n}")
    bit = 1 << (j - 1)
    if a & bit:
        raise ComponentError(f"component {j} belongs to A")
    return int(phi.table[a | bit]) - int(phi.table[a])


# -- signed domination ------------------------------------------------------


@dataclass(frozen=True)
class DominationFunction:
    """Sparse coefficients of the multilinear form of a structure function."""

    n: int
    coeffs: dict[int, int]

    def __call__(self, components: Iterable[int] | int) -> int:
        return self.coeffs.get(to_mask(components, self.n), 0)

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0].bit_count(), members(kv[0])))

    def total(self) -> int:
        return sum(self.coeffs.values())

    def dense(self) -> np.ndarray:
        out = np.zeros(1 << self.n, dtype=np.int64)
        for mask, c in self.coeffs.items():
            out[mask] = c
        return out


def signed_domination(phi: StructureFunction) -> DominationFunction:
    d = _kernels.mobius(phi.table.astype(np.int64), phi.n)
    nz = np.nonzero(d)[0]
    return DominationFunction(phi.n, {int(a): int(d[a]) for a in nz})


def from_domination(d: DominationFunction) -> StructureFunction:
    """phi(A) = sum of d(B) over B subset of A; must land in {0, 1}."""
    table = _kernels.zeta(d.dense(), d.n)
    bad = np.nonzero((table < 0) | (table > 1))[0]
    if bad.size:
        raise NotBinaryError(int(bad[0]), int(table[bad[0]]))
    return StructureFunction(d.n, table.astype(np.uint8))


# -- reliability polynomials ------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial with exact integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c) or (0,))

    def __call__(self, t):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        terms = []
        for p, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if p == 0 else ("t" if p == 1 else f"t^{p}")
            coef = str(c) if (abs(c) != 1 or p == 0) else ("-" if c < 0 else "")
            terms.append(coef + mono)
        return " + ".join(terms).replace("+ -", "- ") or "0"


def reliability_eval(phi: StructureFunction, x: Sequence) -> Fraction:
    """Exact h_phi(x) through the multilinear form."""
    if len(x) != phi.n:
        raise ValueError(f"expected {phi.n} coordinates, got {len(x)}")
    xs = [Fraction(v) for v in x]
    if any(not 0 <= v <= 1 for v in xs):
        raise ValueError("coordinates must lie in [0, 1]")
    total = Fraction(0)
    for mask, c in signed_domination(phi).coeffs.items():
        term = Fraction(c)
        for i in members(mask):
            term *= xs[i - 1]
        total += term
    return total


def reliability_partial_diagonal(psi: StructureFunction, j: int) -> Polynomial:
    """Partial derivative of h_psi in x_j, evaluated at (t, ..., t)."""
    if not 1 <= j <= psi.n:
        raise ComponentError(f"component {j} outside 1..{psi.n}")
    counts = _kernels.bp_critical_counts(psi.table, psi.n)[j - 1]
    rest = psi.n - 1
    coeffs = [0] * (rest + 1)
    for b in range(rest + 1):
        c = int(counts[b])
        if not c:
            continue
        # t^b (1 - t)^(rest - b)
        for i in range(rest - b + 1):
            coeffs[b + i] += c * comb(rest - b, i) * (-1) ** i
    return Polynomial(tuple(coeffs))


# -- modules ----------------------------------------------------------------


def reduced_labels(n: int, module: Iterable[int] | int) -> tuple[int, ...]:
    """Labels of the reduced system: C \\ M plus min(M) standing for [M]."""
    mmask = to_mask(module, n)
    if mmask == 0:
        raise ComponentError("module set must be nonempty")
    keep = members(((1 << n) - 1) & ~mmask) + (members(mmask)[0],)
    return tuple(sorted(keep))


def compose_module(
    psi: StructureFunction, chi: StructureFunction, module: Iterable[int] | int
) -> StructureFunction:
    """phi(x) = psi(chi(x^M), x^(C \\ M)) on ``psi.n + chi.n - 1`` components.

    ``psi`` is indexed by :func:`reduced_labels` (the macro-component takes the
    slot of min(M)); ``chi`` is indexed by the sorted members of M.
    """
    n = psi.n + chi.n - 1
    _check_n(n)
    mmask = to_mask(module, n)
    m_labels = members(mmask)
    if len(m_labels) != chi.n:
        raise DecompositionError(f"chi has {chi.n} components but |M| = {len(m_labels)}")
    labels = reduced_labels(n, mmask)
    macro_bit = labels.index(m_labels[0])
    masks = np.arange(1 << n, dtype=np.int64)
    up = chi.table[_project(masks, m_labels)].astype(np.int64)
    reduced = _project(masks & ~mmask, labels) | (up << macro_bit)
    return StructureFunction(n, psi.table[reduced])


def derive_organizer(phi: StructureFunction, module: Iterable[int] | int) -> StructureFunction:
    """The psi that a valid module must have: [M] up means all of M up."""
    mmask = to_mask(module, phi.n)
    labels = reduced_labels(phi.n, mmask)
    macro_bit = labels.index(members(mmask)[0])
    local = np.arange(1 << len(labels), dtype=np.int64)
    outside = _spread(local & ~(1 << macro_bit), labels)
    full = np.where(((local >> macro_bit) & 1) == 1, outside | mmask, outside)
    return StructureFunction(len(labels), phi.table[full])


def check_module(
    phi: StructureFunction,
    psi: StructureFunction,
    chi: StructureFunction,
    module: Iterable[int] | int,
) -> bool:
    """True iff composing psi with chi on M reproduces phi on all 2^n inputs."""
    if psi.n + chi.n - 1 != phi.n:
        return False
    try:
        return compose_module(psi, chi, module) == phi
    except (DecompositionError, ComponentError):
        return False


@dataclass(frozen=True)
class ModuleDecomposition:
    """A declared module (M, chi) with organizing structure psi.

    ``psi`` component ``i`` is ``reduced[i - 1]``; the macro-component is the
    slot labelled ``min(M)``.
    """

    n: int
    module: tuple[int, ...]
    chi: StructureFunction
    psi: StructureFunction
    validated: bool = False

    @classmethod
    def build(
        cls,
        phi: StructureFunction,
        module: Iterable[int] | int,
        chi: StructureFunction,
        psi: StructureFunction | None = None,
    ) -> "ModuleDecomposition":
        mmask = to_mask(module, phi.n)
        if psi is None:
            psi = derive_organizer(phi, mmask)
        ok = check_module(phi, psi, chi, mmask)
        return cls(phi.n, members(mmask), chi, psi, ok)

    @property
    def mask(self) -> int:
        return to_mask(self.module, self.n)

    @property
    def m(self) -> int:
        return len(self.module)

    @property
    def reduced(self) -> tuple[int, ...]:
        return reduced_labels(self.n, self.mask)

    @property
    def macro(self) -> int:
        """Index of [M] among psi's components (1-based)."""
        return self.reduced.index(self.module[0]) + 1

    def to_reduced(self, mask: int) -> int:
        """Map a mask over C \\ M (original labels) to psi's indexing."""
        out = 0
        for i, label in enumerate(self.reduced):
            if label != self.module[0] and mask >> (label - 1) & 1:
                out |= 1 << i
        return out

    def composed(self) -> StructureFunction:
        return compose_module(self.psi, self.chi, self.mask)

    def require_valid(self):
        if not self.validated:
            raise DecompositionError(f"module {self.module} was not validated")
