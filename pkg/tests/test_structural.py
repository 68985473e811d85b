from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsig import (
    beta_integral,
    exchangeable,
    integrate_polynomial,
    k_out_of_n,
    parallel,
    parse_structure,
    series,
    signed_domination,
    structural_bp,
    structural_signature,
    structural_subsignature,
    structural_subsignature_domination,
    subsignature_direct,
)
from subsig.families import random_semicoherent, semicoherent_functions
from subsig.structural import (
    order_stat_min_closed_form,
    structural_bp_domination,
    structural_sig_domination,
    structural_summary,
)
from subsig.structure import Polynomial, indicator_structure

F = Fraction


def test_examples(sp3, bridge4):
    assert structural_subsignature(sp3, {1, 3}).values == (F(2, 3), F(1, 6))
    assert structural_subsignature(bridge4, {3, 4}).values == (F(1, 6), 0)
    assert structural_subsignature(series(4), {1, 2}).values == subsignature_direct(
        series(4), exchangeable(4), {1, 2}
    ).values == (F(1, 2), 0)
    assert structural_signature(k_out_of_n(2, 3)) == (0, 1, 0)
    assert structural_signature(sp3) == (F(1, 3), F(2, 3), 0)
    assert structural_signature(parallel(5))[-1] == 1
    assert structural_bp(series(3)) == (F(1, 3),) * 3
    assert structural_bp(sp3) == (F(1, 6), F(1, 6), F(2, 3))
    assert structural_bp(bridge4) == (F(7, 12), F(1, 4), F(1, 12), F(1, 12))


def test_domination_routes(sp3, bridge4):
    d = signed_domination(sp3)
    assert structural_subsignature_domination(d, {1, 3}).values == (F(2, 3), F(1, 6))
    assert structural_sig_domination(signed_domination(series(3)))[0] == 1
    assert structural_bp_domination(d)[2] == F(2, 3)
    assert structural_bp_domination(signed_domination(parallel(2)))[0] == F(1, 2)
    assert structural_bp_domination(signed_domination(bridge4))[0] == F(7, 12)


def test_beta_integral_values():
    assert beta_integral(0, 0) == 1
    assert beta_integral(2, 1) == F(1, 12)
    assert beta_integral(1, 1) == F(1, 6)


@given(st.integers(0, 12), st.integers(0, 12))
def test_beta_integral_expansion(p, q):
    # integrate t^p (1-t)^q term by term
    expected = sum(F((-1) ** i * comb(q, i), p + i + 1) for i in range(q + 1))
    assert beta_integral(p, q) == expected == beta_integral(q, p)


def test_integrate_polynomial():
    assert integrate_polynomial(Polynomial((0, 1, -1))) == F(1, 6)
    # weight r_{1,2}(t) = 2t
    assert integrate_polynomial(Polynomial((0, 1, -1)), (1, 2)) == F(1, 6)
    assert integrate_polynomial(Polynomial((1,)), (2, 5)) == 1


def test_closed_form_matches_indicator():
    for n in range(1, 6):
        for a in range(1, 1 << n):
            phi = indicator_structure(a, n)
            for mmask in range(1, 1 << n):
                inside = (a & mmask).bit_count()
                outside = (a & ~mmask).bit_count()
                m = mmask.bit_count()
                vec = structural_subsignature(phi, mmask).values
                dom = structural_subsignature_domination(signed_domination(phi), mmask).values
                for k in range(1, m + 1):
                    closed = order_stat_min_closed_form(m, k, inside, outside)
                    assert vec[k - 1] == dom[k - 1] == closed


def test_exhaustive_small():
    for n in range(1, 5):
        dist = exchangeable(n)
        for phi in semicoherent_functions(n):
            d = signed_domination(phi)
            for mmask in range(1, 1 << n):
                expected = subsignature_direct(phi, dist, mmask).values
                assert structural_subsignature(phi, mmask).values == expected
                assert structural_subsignature_domination(d, mmask).values == expected
            assert structural_sig_domination(d) == structural_signature(phi)
            assert structural_bp_domination(d) == structural_bp(phi)


@given(st.integers(5, 9), st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_random_larger(n, seed):
    rng = np.random.default_rng(seed)
    phi = random_semicoherent(n, rng)
    mmask = int(rng.integers(1, 1 << n))
    assert structural_subsignature(phi, mmask).values == subsignature_direct(phi, exchangeable(n), mmask).values


def test_large_n_release_route():
    phi = random_semicoherent(16, np.random.default_rng(3))
    vec = structural_subsignature(phi, 0b1011, verify=False)
    assert vec.values == structural_subsignature(phi, 0b1011).values
    assert sum(structural_signature(phi, verify=False)) == 1


def test_summary(sp3):
    summary = structural_summary(sp3)
    assert summary["signature"] == (F(1, 3), F(2, 3), 0)
    assert summary["bp"] == (F(1, 6), F(1, 6), F(2, 3))
