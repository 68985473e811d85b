"""Monte Carlo estimators used as a statistical cross-check of the exact engine.

Lifetimes are drawn from continuous models, turned into failure orderings,
and only the orderings are fed to the estimators, so the simulated events
are the same ones the exact routes sum over. Samples are produced in fixed
chunks whose generators are seeded from ``(seed, chunk index)``; results
therefore do not depend on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .lifetime import OrderingDistribution, exchangeable, from_exponential_rates, MAX_ENUMERATED
from .structure import ModuleDecomposition, StructureFunction, members, to_mask

CHUNK = 1 << 14
RNG_ALGORITHM = "numpy.Philox4x64-10/SeedSequence"


@dataclass(frozen=True)
class IIDExponential:
    n: int
    rate: float = 1.0

    def sample(self, rng, size):
        return rng.exponential(1.0 / self.rate, size=(size, self.n))

    def exact(self) -> OrderingDistribution:
        return exchangeable(self.n)


@dataclass(frozen=True)
class IndependentExponential:
    rates: tuple

    @property
    def n(self):
        return len(self.rates)

    def sample(self, rng, size):
        scale = 1.0 / np.array([float(r) for r in self.rates])
        return rng.exponential(1.0, size=(size, self.n)) * scale

    def exact(self) -> OrderingDistribution | None:
        if self.n > MAX_ENUMERATED:
            return None
        return from_exponential_rates([Fraction(r) for r in self.rates])


@dataclass(frozen=True)
class ExchangeableGammaMixture:
    """Conditionally i.i.d. exponentials sharing a Gamma(shape) frailty.

    The lifetimes are dependent but exchangeable.
    """

    n: int
    shape: float = 2.0

    def sample(self, rng, size):
        frailty = rng.gamma(self.shape, 1.0, size=(size, 1))
        return rng.exponential(1.0, size=(size, self.n)) / frailty

    def exact(self) -> OrderingDistribution:
        return exchangeable(self.n)


@dataclass(frozen=True)
class EstimateWithCI:
    estimate: float
    std_error: float
    samples: int
    seed: int
    count: int

    def within(self, exact, sigmas: float = 4.0) -> bool:
        """|estimate - exact| <= sigmas * SE; a zero SE demands an exact hit."""
        diff = abs(self.estimate - float(exact))
        if self.std_error == 0:
            return self.count == round(float(exact) * self.samples) and diff < 1e-12
        return diff <= sigmas * self.std_error


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _orders_from_lifetimes(model, rng, size) -> tuple[np.ndarray, int]:
    life = model.sample(rng, size)
    ties = 0
    while True:
        srt = np.sort(life, axis=1)
        bad = np.nonzero((np.diff(srt, axis=1) == 0).any(axis=1))[0]
        if bad.size == 0:
            break
        ties += int(bad.size)
        life[bad] = model.sample(rng, bad.size)
    return np.argsort(life, axis=1).astype(np.int8), ties


def sample_orderings(model, seed: int, size: int, chunk: int = 0) -> tuple[np.ndarray, int]:
    """``size`` failure orderings (0-based component rows) and the tie count."""
    return _orders_from_lifetimes(model, _rng(seed, chunk), size)


def sample_ordering(model, rng: np.random.Generator) -> tuple[int, ...]:
    """One ordering, components 1-based, first failure first."""
    orders, _ = _orders_from_lifetimes(model, rng, 1)
    return tuple(int(c) + 1 for c in orders[0])


@dataclass(frozen=True)
class SimulationResult:
    counts: np.ndarray
    samples: int
    seed: int
    ties: int


def simulate(
    model,
    samples: int,
    seed: int,
    tally: Callable[[np.ndarray], np.ndarray],
    width: int,
    threads: int | None = None,
) -> SimulationResult:
    """Run ``tally`` (orderings -> int64 counts of length ``width``) over all chunks."""
    if samples < 1:
        raise ValueError("need at least one sample")
    chunks = math.ceil(samples / CHUNK)

    def work(c):
        size = min(CHUNK, samples - c * CHUNK)
        orders, ties = sample_orderings(model, seed, size, chunk=c)
        return tally(orders), ties

    if threads and threads > 1 and chunks > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, range(chunks)))
    else:
        parts = [work(c) for c in range(chunks)]
    counts = np.zeros(width, dtype=np.int64)
    ties = 0
    for part, t in parts:
        counts += part
        ties += t
    return SimulationResult(counts, samples, seed, ties)


def _estimates(result: SimulationResult) -> tuple[EstimateWithCI, ...]:
    out = []
    for c in result.counts.tolist():
        p = c / result.samples
        se = math.sqrt(p * (1 - p) / result.samples)
        out.append(EstimateWithCI(p, se, result.samples, result.seed, int(c)))
    return tuple(out)


def _killers(phi: StructureFunction, orders: np.ndarray) -> np.ndarray:
    kill = _kernels.killing_positions(orders, phi.table)
    return orders[np.arange(len(orders)), kill].astype(np.int64), kill


def estimate_subsignature(
    phi: StructureFunction,
    module: Iterable[int] | int,
    model,
    samples: int,
    seed: int,
    threads: int | None = None,
) -> tuple[EstimateWithCI, ...]:
    """Empirical Pr(T_C = T_{k:M}) for k = 1..m."""
    mmask = to_mask(module, phi.n)
    m = mmask.bit_count()

    def tally(orders):
        killer, kill = _killers(phi, orders)
        in_m = (mmask >> orders.astype(np.int64)) & 1
        rank = np.cumsum(in_m, axis=1)[np.arange(len(orders)), kill]
        hit = (mmask >> killer) & 1 == 1
        return np.bincount(rank[hit] - 1, minlength=m)[:m].astype(np.int64)

    return _estimates(simulate(model, samples, seed, tally, m, threads))


def estimate_bp(
    phi: StructureFunction, model, samples: int, seed: int, threads: int | None = None
) -> tuple[EstimateWithCI, ...]:
    """Empirical Pr(T_C = T_j) for every component."""

    def tally(orders):
        killer, _ = _killers(phi, orders)
        return np.bincount(killer, minlength=phi.n).astype(np.int64)

    return _estimates(simulate(model, samples, seed, tally, phi.n, threads))


def estimate_module_attribution(
    dec: ModuleDecomposition, model, samples: int, seed: int, threads: int | None = None
) -> EstimateWithCI:
    """Empirical Pr(T_C = T_M), i.e. the fatal failure belongs to M."""
    phi = dec.composed()
    mmask = dec.mask

    def tally(orders):
        killer, _ = _killers(phi, orders)
        return np.array([int(((mmask >> killer) & 1).sum())], dtype=np.int64)

    return _estimates(simulate(model, samples, seed, tally, 1, threads))[0]
