from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from subsig import (
    ComponentError,
    NormalizationUndefined,
    barlow_proschan,
    exchangeable,
    failure_attribution,
    from_exponential_rates,
    from_orderings,
    k_out_of_n,
    normalized_subsignature,
    parallel,
    parse_structure,
    probability_signature,
    random_ordering_distribution,
    series,
    signed_domination,
    subsignature_direct,
    subsignature_domination,
    subsignature_oracle,
    subsignature_phi_weighted,
    subsignature_updown,
)
from subsig.families import random_semicoherent
from subsig.structure import indicator_structure, members

F = Fraction


def all_routes(phi, dist, module):
    d = signed_domination(phi)
    return [
        subsignature_direct(phi, dist, module).values,
        subsignature_phi_weighted(phi, dist, module).values,
        subsignature_updown(phi, dist, module).values,
        subsignature_domination(d, dist, module).values,
    ]


class TestExamples:
    def test_series_parallel_subsig(self, sp3):
        for dist in (exchangeable(3), exchangeable(3).materialize()):
            for values in all_routes(sp3, dist, {1, 3}):
                assert values == (F(2, 3), F(1, 6))
        assert subsignature_oracle(sp3, exchangeable(3).materialize(), {1, 3}).values == (F(2, 3), F(1, 6))

    def test_domination_route_example(self, sp3):
        # d-sum written out with the three order-statistic events
        dist = exchangeable(3)
        m = {1, 3}
        expected = (
            dist.order_stat_min_prob(m, 1, {1, 3}) + dist.order_stat_min_prob(m, 1, {2, 3})
            - dist.order_stat_min_prob(m, 1, {1, 2, 3})
        )
        assert expected == F(2, 3)
        assert subsignature_domination(signed_domination(sp3), dist, m).values[0] == expected

    def test_signature(self, sp3):
        assert probability_signature(sp3, exchangeable(3)).values == (F(1, 3), F(2, 3), F(0))
        assert probability_signature(k_out_of_n(2, 3), exchangeable(3)).values == (0, 1, 0)
        assert probability_signature(parallel(3), exchangeable(3)).values == (0, 0, 1)
        # the first coordinate is the mass of the two orderings starting with 3
        uni = exchangeable(3).materialize()
        assert uni.probability((3, 1, 2)) + uni.probability((3, 2, 1)) == F(1, 3)

    def test_series_parallel_any_law(self, rng):
        for n in (2, 3, 4):
            dist = random_ordering_distribution(n, rng, support=5)
            full = (1 << n) - 1
            assert subsignature_direct(series(n), dist, full).values == (1,) + (0,) * (n - 1)
            assert subsignature_direct(parallel(n), dist, full).values == (0,) * (n - 1) + (1,)

    def test_bp(self, sp3):
        assert barlow_proschan(series(3), exchangeable(3)).values == (F(1, 3),) * 3
        assert barlow_proschan(sp3, exchangeable(3)).values == (F(1, 6), F(1, 6), F(2, 3))
        assert barlow_proschan(series(2), from_exponential_rates([1, 2])).values == (F(1, 3), F(2, 3))

    def test_attribution_and_normalized(self, sp3):
        dist = exchangeable(3)
        assert failure_attribution(sp3, dist, {1, 3}) == F(5, 6)
        assert failure_attribution(sp3, dist, {1, 2, 3}) == 1
        assert normalized_subsignature(sp3, dist, {1, 3}) == (F(4, 5), F(1, 5))
        assert normalized_subsignature(sp3, dist, {1, 2, 3}) == probability_signature(sp3, dist).values

    def test_irrelevant_component(self):
        phi = parse_structure("x1 & x2", 3)
        dist = exchangeable(3)
        assert failure_attribution(phi, dist, {3}) == 0
        assert subsignature_direct(phi, dist, {3}).values == (0,)
        with pytest.raises(NormalizationUndefined):
            normalized_subsignature(phi, dist, {3})

    def test_empty_module(self, sp3):
        with pytest.raises(ComponentError):
            subsignature_direct(sp3, exchangeable(3), set())

    def test_two_component_display(self, rng):
        """M = {i, j}: first coordinate from the two-row specialization."""
        phi = random_semicoherent(4, rng)
        dist = random_ordering_distribution(4, rng)
        i, j = 2, 4
        rest = [1, 3]
        table = phi.table

        def dphi(c, s):
            a = sum(1 << (x - 1) for x in s)
            return int(table[a | 1 << (c - 1)]) - int(table[a])

        first = F(0)
        second = F(0)
        for r in range(4):
            base = {rest[t] for t in range(2) if r >> t & 1}
            first += dist.q_component(i, base | {j}) * dphi(i, base | {j})
            first += dist.q_component(j, base | {i}) * dphi(j, base | {i})
            second += dist.q_component(i, base) * dphi(i, base)
            second += dist.q_component(j, base) * dphi(j, base)
        assert subsignature_direct(phi, dist, {i, j}).values == (first, second)


class TestAgainstOracle:
    @given(st.integers(2, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_routes_match_brute_force(self, n, seed):
        rng = np.random.default_rng(seed)
        phi = random_semicoherent(n, rng)
        dist = random_ordering_distribution(n, rng, support=int(rng.integers(1, 25)))
        law = {tuple(o): p for o, p in dist.support()}
        pred = oracles.table_predicate(phi)
        mmask = int(rng.integers(1, 1 << n))
        expected = oracles.subsignature(pred, law, members(mmask))
        assert subsignature_oracle(phi, dist, mmask).values == expected
        for values in all_routes(phi, dist, mmask):
            assert values == expected
        assert barlow_proschan(phi, dist).values == oracles.bp(pred, law, n)

    def test_exponential_law(self, bridge4):
        rates = [1, 2, 3, 5]
        law = oracles.race_law(rates)
        dist = from_exponential_rates(rates)
        pred = oracles.table_predicate(bridge4)
        assert subsignature_direct(bridge4, dist, {3, 4}).values == oracles.subsignature(pred, law, (3, 4))


class TestInvariants:
    @given(st.integers(2, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_sum_is_bp_mass(self, n, seed):
        rng = np.random.default_rng(seed)
        phi = random_semicoherent(n, rng)
        dist = random_ordering_distribution(n, rng, support=8)
        bp = barlow_proschan(phi, dist).values
        mmask = int(rng.integers(1, 1 << n))
        vec = subsignature_direct(phi, dist, mmask)
        assert all(0 <= v <= 1 for v in vec.values)
        assert vec.total() == sum(bp[j - 1] for j in members(mmask))
        assert vec.total() == failure_attribution(phi, dist, mmask)
        assert subsignature_direct(phi, dist, (1 << n) - 1).total() == 1
        for j in range(1, n + 1):
            assert subsignature_direct(phi, dist, {j}).values == (bp[j - 1],)

    @given(st.integers(2, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_single_ordering_is_indicator(self, n, seed):
        rng = np.random.default_rng(seed)
        phi = random_semicoherent(n, rng)
        order = tuple(int(c) + 1 for c in rng.permutation(n))
        dist = from_orderings([(order, 1)])
        mmask = int(rng.integers(1, 1 << n))
        vec = subsignature_direct(phi, dist, mmask).values
        assert all(v in (0, 1) for v in vec)
        killer = oracles.killer(oracles.table_predicate(phi), order)
        assert sum(vec) == (1 if (mmask >> (killer - 1)) & 1 else 0)

    @given(st.integers(2, 5), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_indicator_structure_is_order_statistic(self, n, seed):
        rng = np.random.default_rng(seed)
        dist = random_ordering_distribution(n, rng, support=10)
        a = int(rng.integers(1, 1 << n))
        mmask = int(rng.integers(1, 1 << n))
        vec = subsignature_direct(indicator_structure(a, n), dist, mmask).values
        for k in range(1, mmask.bit_count() + 1):
            assert vec[k - 1] == dist.order_stat_min_prob(mmask, k, a)
