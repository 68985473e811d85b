"""Brute-force reference computations sharing no code with the package.

Structures here are plain Python predicates on frozensets of labels, and
laws are dicts {ordering tuple: Fraction}.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def subsets(labels):
    labels = list(labels)
    for r in range(len(labels) + 1):
        for combo in itertools.combinations(labels, r):
            yield frozenset(combo)


def table_predicate(phi):
    """Wrap a StructureFunction table as a predicate on label sets."""
    table = phi.table.tolist()
    return lambda s: table[sum(1 << (c - 1) for c in s)]


def uniform_law(n):
    perms = list(itertools.permutations(range(1, n + 1)))
    return {p: Fraction(1, len(perms)) for p in perms}


def race_law(rates):
    """Exponential race probabilities by integrating the joint density symbolically.

    For independent exponentials, Pr(T_a < T_b < ...) is the nested integral of
    prod rate_i exp(-rate_i t_i); integrating innermost-last gives
    rate_a / (sum of remaining rates) at each stage. This walks the integral
    one variable at a time, keeping a sum of exponentials as {exponent: coef}.
    """
    n = len(rates)
    law = {}
    for perm in itertools.permutations(range(1, n + 1)):
        # integrate t_last from t_prev to inf, then outward
        # represent the running integrand as {decay rate: coefficient}
        terms = {Fraction(0): Fraction(1)}
        for c in reversed(perm):
            lam = Fraction(rates[c - 1])
            new = {}
            for decay, coef in terms.items():
                # int_{s}^{inf} lam e^{-lam t} e^{-decay t} dt = lam/(lam+decay) e^{-(lam+decay) s}
                total = lam + decay
                new[total] = new.get(total, 0) + coef * lam / total
            terms = new
        # outermost lower limit s = 0
        law[perm] = sum(terms.values(), Fraction(0))
    return law


def killer(pred, order):
    """Component whose failure brings the system down, replaying ``order``."""
    alive = set(order)
    for c in order:
        alive.discard(c)
        if not pred(frozenset(alive)):
            return c
    raise AssertionError("system never fails")


def subsignature(pred, law, module):
    module = sorted(module)
    m = len(module)
    out = [Fraction(0)] * m
    for order, p in law.items():
        c = killer(pred, order)
        if c in module:
            k = [x for x in order if x in module].index(c) + 1
            out[k - 1] += p
    return tuple(out)


def bp(pred, law, n):
    out = [Fraction(0)] * n
    for order, p in law.items():
        out[killer(pred, order) - 1] += p
    return tuple(out)


def q(law, a):
    a = frozenset(a)
    r = len(a)
    return sum((p for o, p in law.items() if frozenset(o[len(o) - r:]) == a), Fraction(0))


def q_component(law, j, a):
    a = frozenset(a)
    r = len(a)
    total = Fraction(0)
    for o, p in law.items():
        n = len(o)
        if o[n - r - 1] == j and frozenset(o[n - r:]) == a:
            total += p
    return total


def domination(pred, n):
    """d(A) = sum over B in A of (-1)^{|A-B|} phi(B), straight from the definition."""
    out = {}
    for a in subsets(range(1, n + 1)):
        v = sum((-1) ** (len(a) - len(b)) * pred(b) for b in subsets(a))
        if v:
            out[a] = v
    return out


def marginal(law, labels):
    out = {}
    for o, p in law.items():
        key = tuple(c for c in o if c in labels)
        out[key] = out.get(key, 0) + p
    return out


def exchangeable_q(n, size):
    return Fraction(1, n * math.comb(n - 1, size))
