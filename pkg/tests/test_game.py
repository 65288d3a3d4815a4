import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import matching_pennies, prisoners_dilemma
from pathnash.game import (
    BimatrixGame,
    DimensionMismatch,
    StrategyProfile,
    best_responses,
    epsilon,
    epsilon_ws,
    metrics,
    normalize,
    positive_shift,
    regret,
    verify_ne,
)
from pathnash.generators import GenSpec, generate
from pathnash.oracle import enumerate_equilibria

HALF = (F(1, 2), F(1, 2))


def random_profile(rng, m1, m2):
    def simplex(n):
        w = [rng.randint(0, 8) for _ in range(n)]
        if not any(w):
            w[0] = 1
        return [F(v, sum(w)) for v in w]

    return StrategyProfile(simplex(m1), simplex(m2))


def test_rejects_ragged():
    with pytest.raises(DimensionMismatch):
        BimatrixGame([[1, 2], [3]], [[1, 2], [3, 4]])
    with pytest.raises(DimensionMismatch):
        BimatrixGame([[1, 2]], [[1, 2], [3, 4]])


def test_normalize_two_values():
    g = normalize(BimatrixGame([[2, 7], [7, 2]], [[1, 1], [1, 1]]))
    assert {e for row in g.u1 for e in row} == {0, 1}
    assert g.normalized


def test_normalize_idempotent():
    g = generate(GenSpec("random", 3, 4, seed=1))
    assert normalize(g).same_payoffs(g)


def test_normalize_preserves_equilibria():
    g = BimatrixGame([[3, 9, 1], [4, 2, 8], [6, 5, 7]], [[2, 1, 5], [9, 3, 4], [1, 8, 6]])
    assert enumerate_equilibria(g) == enumerate_equilibria(normalize(g))


def test_positive_shift():
    g = generate(GenSpec("random", 3, 3, seed=2))
    h = positive_shift(g)
    assert all(b - a == 1 for ra, rb in zip(g.u1, h.u1) for a, b in zip(ra, rb))
    assert min(min(r) for r in h.u2) == 1
    assert positive_shift(h).same_payoffs(h)
    assert enumerate_equilibria(g) == enumerate_equilibria(h)


def test_epsilon_matching_pennies():
    g = matching_pennies()
    assert epsilon(g, StrategyProfile(HALF, HALF)) == 0
    assert epsilon(g, StrategyProfile((1, 0), (1, 0))) == 1


def test_epsilon_ws_matching_pennies():
    g = matching_pennies()
    assert epsilon_ws(g, StrategyProfile(HALF, HALF)) == 0
    assert epsilon_ws(g, StrategyProfile(HALF, (1, 0))) == 1


def test_regret_singleton_supports():
    g = matching_pennies()
    p = StrategyProfile((1, 0), (1, 0))
    m = metrics(g, p)
    # agent 1 loses 0, agent 2 loses 1
    assert m.regret == 1 == m.eps_ws


def test_regret_uniform_recomputed():
    g = generate(GenSpec("random", 3, 3, seed=5))
    p = StrategyProfile([F(1, 3)] * 3, [F(1, 3)] * 3)
    r = F(0)
    for j in range(3):
        pays = [sum(g.u1[a][b] for b in range(3)) / 3 for a in range(3)]
        r += max(pays) - pays[j]
    for k in range(3):
        pays = [sum(g.u2[a][b] for a in range(3)) / 3 for b in range(3)]
        r += max(pays) - pays[k]
    assert regret(g, p) == r


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_metric_ordering(seed):
    rng = random.Random(seed)
    g = generate(GenSpec("random", rng.randint(1, 4), rng.randint(1, 4), seed=seed))
    m = metrics(g, random_profile(rng, g.m1, g.m2))
    assert 0 <= m.eps <= m.eps_ws <= m.regret


def test_verify_ne_examples():
    assert verify_ne(matching_pennies(), StrategyProfile(HALF, HALF))
    assert verify_ne(prisoners_dilemma(), StrategyProfile((0, 1), (0, 1)))
    assert not verify_ne(prisoners_dilemma(), StrategyProfile((1, 0), (1, 0)))


def test_verify_ne_invalid_profiles():
    g = matching_pennies()
    assert not verify_ne(g, StrategyProfile((1, 1), HALF))
    assert not verify_ne(g, StrategyProfile(HALF, HALF + (0,)))


def test_oracle_equilibria_have_zero_epsilon():
    for seed in range(5):
        g = generate(GenSpec("random", 3, 3, seed=seed))
        for p in enumerate_equilibria(g):
            assert epsilon(g, p) == 0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), a=st.integers(1, 9), b=st.integers(-9, 9))
def test_affine_invariance(seed, a, b):
    rng = random.Random(seed)
    g = generate(GenSpec("random", 3, 3, seed=seed))
    h = BimatrixGame([[a * e + b for e in row] for row in g.u1], g.u2)
    for _ in range(5):
        p = random_profile(rng, 3, 3)
        assert verify_ne(g, p) == verify_ne(h, p)
        assert best_responses(g, p, 1) == best_responses(h, p, 1)
