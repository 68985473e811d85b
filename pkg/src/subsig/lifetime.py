"""Joint lifetime laws, represented through their failure-ordering distribution.

Under a tie-free joint law every quantity computed by this package depends on
the lifetimes only through the probabilities of the ``n!`` orderings
``T_s(1) < ... < T_s(n)``. An :class:`OrderingDistribution` is either an
explicit sparse map from orderings to exact rationals, or the symbolic
exchangeable law, which answers every query in closed form.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import CapacityError, ComponentError, DistributionError, EnumerationRequired
from .structure import MAX_COMPONENTS, members, to_mask

MAX_ENUMERATED = 10
_TABLE_LIMIT = 16


@lru_cache(maxsize=None)
def component_weight(n: int, size: int) -> Fraction:
    """q_j(A) = 1 / (n C(n-1, |A|)) for exchangeable lifetimes."""
    return Fraction(1, n * math.comb(n - 1, size))


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise DistributionError(f"refusing float probability {value!r}; use an exact rational")
    return Fraction(value)


class OrderingDistribution:
    """Probability law of the failure ordering of ``n`` components.

    Build instances with :func:`exchangeable`, :func:`from_orderings` or
    :func:`from_exponential_rates`. Instances are immutable.
    """

    def __init__(self, n, kind, orders=None, numerators=None, denominator=1, rates=None):
        if not 1 <= n <= MAX_COMPONENTS:
            raise CapacityError(f"n = {n} outside 1..{MAX_COMPONENTS}")
        self.n = n
        self.kind = kind
        self.rates = rates
        if kind == "explicit":
            orders = np.ascontiguousarray(orders, dtype=np.int8)
            orders.setflags(write=False)
            self.orders = orders
            self.numerators = tuple(numerators)
            self.denominator = denominator
        else:
            self.orders = None
            self.numerators = None
            self.denominator = None

    def __repr__(self):
        if self.kind == "exchangeable":
            return f"OrderingDistribution.exchangeable({self.n})"
        return f"<OrderingDistribution n={self.n} support={len(self.numerators)}>"

    @property
    def is_exchangeable(self) -> bool:
        return self.kind == "exchangeable"

    # -- support --------------------------------------------------------

    def _require_explicit(self):
        if self.kind != "explicit":
            raise EnumerationRequired(
                "symbolic exchangeable distribution; call materialize() first"
            )

    def support(self):
        """Yield ``(ordering, probability)`` with 1-based component labels."""
        self._require_explicit()
        for row, num in zip(self.orders, self.numerators):
            yield tuple(int(c) + 1 for c in row), Fraction(num, self.denominator)

    def probability(self, ordering: Sequence[int]) -> Fraction:
        if sorted(ordering) != list(range(1, self.n + 1)):
            raise ComponentError(f"{ordering} is not a permutation of 1..{self.n}")
        if self.is_exchangeable:
            return Fraction(1, math.factorial(self.n))
        return self._index.get(tuple(ordering), Fraction(0))

    @cached_property
    def _index(self):
        return dict(self.support())

    @cached_property
    def weights(self) -> np.ndarray:
        """Integer numerators over :attr:`denominator`, int64 when they fit."""
        self._require_explicit()
        return _kernels.as_weights(self.numerators)

    def materialize(self) -> "OrderingDistribution":
        """Explicit copy of this law (the uniform law for exchangeable)."""
        if self.kind == "explicit":
            return self
        if self.n > MAX_ENUMERATED:
            raise CapacityError(f"cannot enumerate {self.n}! orderings (cap n <= {MAX_ENUMERATED})")
        orders = np.array(list(itertools.permutations(range(self.n))), dtype=np.int8)
        return OrderingDistribution(
            self.n, "explicit", orders, [1] * len(orders), len(orders)
        )

    def marginal(self, labels: Iterable[int]) -> "OrderingDistribution":
        """Law of the relative order of the given components, relabelled 1..m."""
        labels = sorted(labels)
        if not labels or labels[0] < 1 or labels[-1] > self.n:
            raise ComponentError(f"bad component subset {labels}")
        m = len(labels)
        if self.is_exchangeable:
            return exchangeable(m)
        local = np.full(self.n, -1, dtype=np.int64)
        local[np.array(labels) - 1] = np.arange(m)
        mapped = local[self.orders.astype(np.int64)]
        kept = mapped[mapped >= 0].reshape(len(self.orders), m)
        acc: dict[tuple, int] = {}
        for row, num in zip(map(tuple, kept.tolist()), self.numerators):
            acc[row] = acc.get(row, 0) + num
        rows = sorted(acc)
        nums = [acc[r] for r in rows]
        g = math.gcd(self.denominator, *nums)
        return OrderingDistribution(
            m,
            "explicit",
            np.array(rows, dtype=np.int8).reshape(len(rows), m),
            [x // g for x in nums],
            self.denominator // g,
        )

    # -- relative quality functions ------------------------------------

    @cached_property
    def _tables(self):
        q, qj = _kernels.quality_counts(self.orders, self.weights, self.n)
        return q, qj

    @cached_property
    def _positions(self) -> np.ndarray:
        """``pos[r, c]`` is the failure index of component c in ordering r."""
        k = len(self.orders)
        pos = np.empty((k, self.n), dtype=np.int64)
        rows = np.repeat(np.arange(k), self.n)
        pos[rows, self.orders.reshape(-1).astype(np.int64)] = np.tile(np.arange(self.n), k)
        return pos

    def _mass(self, selected: np.ndarray) -> Fraction:
        if selected.dtype == bool:
            total = sum(w for w, s in zip(self.weights.tolist(), selected.tolist()) if s)
        else:
            total = int(selected)
        return Fraction(total, self.denominator)

    def q(self, components: Iterable[int] | int) -> Fraction:
        """Probability that the |A| best components are exactly those of A."""
        a = to_mask(components, self.n)
        size = a.bit_count()
        if self.is_exchangeable:
            return Fraction(1, math.comb(self.n, size))
        if self.n <= _TABLE_LIMIT:
            return Fraction(int(self._tables[0][a]), self.denominator)
        alive = _kernels._numpy.suffix_masks(self.orders)[:, self.n - size]
        return self._mass(alive == a)

    def q_component(self, j: int, components: Iterable[int] | int) -> Fraction:
        """Probability that the components outliving j are exactly those of A."""
        a = to_mask(components, self.n)
        if not 1 <= j <= self.n:
            raise ComponentError(f"component {j} outside 1..{self.n}")
        if a >> (j - 1) & 1:
            raise ComponentError(f"component {j} belongs to A")
        if self.is_exchangeable:
            return component_weight(self.n, a.bit_count())
        if self.n <= _TABLE_LIMIT:
            return Fraction(int(self._tables[1][j - 1, a]), self.denominator)
        size = a.bit_count()
        alive = _kernels._numpy.suffix_masks(self.orders)
        hit = (self.orders[:, self.n - size - 1] == j - 1) & (alive[:, self.n - size] == a)
        return self._mass(hit)

    # Unchecked accessors for the formula routes: values are numerators over
    # ``scale`` so that explicit laws accumulate in integers.

    @property
    def scale(self) -> int:
        return 1 if self.is_exchangeable else self.denominator

    def _q_raw(self, a: int):
        if self.is_exchangeable:
            return Fraction(1, math.comb(self.n, a.bit_count()))
        if self.n <= _TABLE_LIMIT:
            return int(self._tables[0][a])
        return self.q(a) * self.denominator

    def _qj_raw(self, j0: int, a: int):
        if self.is_exchangeable:
            return component_weight(self.n, a.bit_count())
        if self.n <= _TABLE_LIMIT:
            return int(self._tables[1][j0, a])
        return self.q_component(j0 + 1, a) * self.denominator

    def q_down(self, module: Iterable[int] | int, components: Iterable[int] | int) -> Fraction:
        """Sum over j in M & A of q_j(A - j)."""
        mmask = to_mask(module, self.n)
        a = to_mask(components, self.n)
        if a == 0:
            raise ComponentError("q_down is defined for nonempty A only")
        if self.is_exchangeable:
            size = a.bit_count()
            return Fraction((mmask & a).bit_count(), self.n * math.comb(self.n - 1, size - 1))
        return sum(
            (self.q_component(j, a & ~(1 << (j - 1))) for j in members(mmask & a)),
            Fraction(0),
        )

    def q_up(self, module: Iterable[int] | int, components: Iterable[int] | int) -> Fraction:
        """Sum over j in M \\ A of q_j(A)."""
        mmask = to_mask(module, self.n)
        a = to_mask(components, self.n)
        if a == (1 << self.n) - 1:
            raise ComponentError("q_up is defined for A != C only")
        if self.is_exchangeable:
            return Fraction((mmask & ~a).bit_count(), self.n * math.comb(self.n - 1, a.bit_count()))
        return sum((self.q_component(j, a) for j in members(mmask & ~a)), Fraction(0))

    def order_stat_min_prob(
        self, module: Iterable[int] | int, k: int, components: Iterable[int] | int
    ) -> Fraction:
        """Pr(T_{k:M} = min over A of T_i)."""
        mmask = to_mask(module, self.n)
        a = to_mask(components, self.n)
        m = mmask.bit_count()
        if mmask == 0 or a == 0:
            raise ComponentError("M and A must be nonempty")
        if not 1 <= k <= m:
            raise ComponentError(f"k = {k} outside 1..{m}")
        if self.is_exchangeable:
            inside = (a & mmask).bit_count()
            outside = (a & ~mmask).bit_count()
            return Fraction(inside, m + outside) * Fraction(
                math.comb(m - inside, k - 1), math.comb(m + outside - 1, k - 1)
            )
        mpos = self._sorted_positions(mmask)[:, k - 1]
        apos = self._positions[:, np.array(members(a)) - 1].min(axis=1)
        return self._mass(mpos == apos)

    def _sorted_positions(self, mmask: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_sorted_cache", {})
        if mmask not in cache:
            cache[mmask] = np.sort(self._positions[:, np.array(members(mmask)) - 1], axis=1)
        return cache[mmask]


def exchangeable(n: int) -> OrderingDistribution:
    """The uniform ordering law shared by all exchangeable lifetime vectors."""
    return OrderingDistribution(n, "exchangeable")


def from_orderings(
    entries: Iterable[tuple[Sequence[int], object]], rates=None
) -> OrderingDistribution:
    """Explicit law from ``(ordering, probability)`` pairs; omitted orderings get 0."""
    entries = [(tuple(int(c) for c in o), _as_fraction(p)) for o, p in entries]
    if not entries:
        raise DistributionError("no orderings given")
    n = len(entries[0][0])
    seen = set()
    for order, p in entries:
        if sorted(order) != list(range(1, n + 1)):
            raise DistributionError(f"{list(order)} is not a permutation of 1..{n}")
        if order in seen:
            raise DistributionError(f"duplicate ordering {list(order)}")
        seen.add(order)
        if p <= 0:
            raise DistributionError(f"probability of {list(order)} must be positive, got {p}")
    total = sum(p for _, p in entries)
    if total != 1:
        raise DistributionError(f"probabilities sum to {total}, not 1")
    denominator = math.lcm(*(p.denominator for _, p in entries))
    orders = np.array([[c - 1 for c in o] for o, _ in entries], dtype=np.int8)
    nums = [p.numerator * (denominator // p.denominator) for _, p in entries]
    return OrderingDistribution(n, "explicit", orders, nums, denominator, rates)


def exponential_race(rates: Sequence[Fraction], ordering: Sequence[int]) -> Fraction:
    """Pr(ordering) for independent exponentials: product of rate / remaining total."""
    remaining = sum(rates[c - 1] for c in ordering)
    p = Fraction(1)
    for c in ordering:
        p *= rates[c - 1] / remaining
        remaining -= rates[c - 1]
    return p


def from_exponential_rates(rates: Sequence) -> OrderingDistribution:
    """Ordering law of independent exponential lifetimes with the given rates."""
    rates = tuple(_as_fraction(r) for r in rates)
    n = len(rates)
    if not 1 <= n <= MAX_ENUMERATED:
        raise CapacityError(f"exponential rates need 1 <= n <= {MAX_ENUMERATED}, got {n}")
    if any(r <= 0 for r in rates):
        raise DistributionError(f"rates must be positive: {[str(r) for r in rates]}")
    entries = [(o, exponential_race(rates, o)) for o in itertools.permutations(range(1, n + 1))]
    return from_orderings(entries, rates=rates)


def random_ordering_distribution(
    n: int, rng: np.random.Generator, support: int | None = None, max_weight: int = 9
) -> OrderingDistribution:
    """Random explicit law: ``support`` distinct orderings with integer weights.

    ``support=None`` puts mass on every ordering (requires n <= 8).
    """
    if support is None:
        if n > 8:
            raise CapacityError("full-support random laws are limited to n <= 8")
        orders = [list(p) for p in itertools.permutations(range(1, n + 1))]
    else:
        chosen = {}
        limit = min(support, math.factorial(n))
        while len(chosen) < limit:
            perm = tuple(int(c) + 1 for c in rng.permutation(n))
            chosen[perm] = None
        orders = list(chosen)
    weights = rng.integers(1, max_weight + 1, size=len(orders)).tolist()
    total = sum(weights)
    return from_orderings((o, Fraction(w, total)) for o, w in zip(orders, weights))
