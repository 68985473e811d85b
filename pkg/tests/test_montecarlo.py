from fractions import Fraction

import numpy as np
import pytest

from subsig import (
    ExchangeableGammaMixture,
    IIDExponential,
    IndependentExponential,
    ModuleDecomposition,
    barlow_proschan,
    estimate_bp,
    estimate_module_attribution,
    estimate_subsignature,
    exchangeable,
    parse_structure,
    sample_ordering,
    series,
    subsignature_direct,
)
from subsig.montecarlo import CHUNK, EstimateWithCI, sample_orderings, simulate


def test_orderings_are_permutations():
    orders, ties = sample_orderings(IIDExponential(5), seed=1, size=1000)
    assert ties == 0
    assert (np.sort(orders, axis=1) == np.arange(5)).all()
    one = sample_ordering(IIDExponential(3), np.random.default_rng(0))
    assert sorted(one) == [1, 2, 3]


class _Coarse:
    """Lifetimes on a grid of 4 values, so ties are frequent."""

    n = 3

    def sample(self, rng, size):
        return rng.integers(0, 4, size=(size, self.n)).astype(float)


def test_ties_are_resampled_and_counted():
    orders, ties = sample_orderings(_Coarse(), seed=3, size=500)
    assert ties > 0
    assert (np.sort(orders, axis=1) == np.arange(3)).all()


def test_example_subsignature(sp3):
    est = estimate_subsignature(sp3, {1, 3}, IIDExponential(3), 100_000, seed=11)
    exact = subsignature_direct(sp3, exchangeable(3), {1, 3}).values
    assert all(e.within(x) for e, x in zip(est, exact))


def test_thread_count_does_not_matter(sp3):
    n = 3 * CHUNK + 17
    a = estimate_subsignature(sp3, {1, 3}, IIDExponential(3), n, seed=5, threads=1)
    b = estimate_subsignature(sp3, {1, 3}, IIDExponential(3), n, seed=5, threads=4)
    assert a == b


def test_seed_changes_result(sp3):
    a = estimate_bp(sp3, IIDExponential(3), 20_000, seed=1)
    b = estimate_bp(sp3, IIDExponential(3), 20_000, seed=2)
    assert a != b


def test_independent_rates():
    model = IndependentExponential((1, 2))
    est = estimate_bp(series(2), model, 100_000, seed=21)
    exact = barlow_proschan(series(2), model.exact()).values
    assert exact == (Fraction(1, 3), Fraction(2, 3))
    assert all(e.within(x) for e, x in zip(est, exact))


def test_dependent_exchangeable_mixture(bridge4):
    model = ExchangeableGammaMixture(4, shape=0.7)
    est = estimate_subsignature(bridge4, {3, 4}, model, 100_000, seed=8)
    exact = subsignature_direct(bridge4, model.exact(), {3, 4}).values
    assert all(e.within(x) for e, x in zip(est, exact))


def test_module_attribution(bridge4):
    dec = ModuleDecomposition.build(bridge4, {3, 4}, series(2))
    est = estimate_module_attribution(dec, IIDExponential(4), 100_000, seed=4)
    assert est.within(Fraction(1, 6))


def test_within_zero_error():
    sure = EstimateWithCI(1.0, 0.0, 10, 0, 10)
    assert sure.within(1)
    assert not sure.within(Fraction(9, 10))


def test_simulate_rejects_empty():
    with pytest.raises(ValueError):
        simulate(IIDExponential(2), 0, 0, lambda o: np.zeros(1, dtype=np.int64), 1)


def test_large_n_has_no_exact():
    assert IndependentExponential(tuple(range(1, 13))).exact() is None
