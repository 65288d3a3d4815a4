import random
from fractions import Fraction as F
from itertools import combinations, product

import pytest

from conftest import dominant, matching_pennies
from pathnash.game import StrategyProfile, epsilon, positive_shift, verify_ne
from pathnash.generators import GenSpec, corpus, generate
from pathnash.lsv import (
    LSVConfig,
    TabuExhausted,
    artificial_vertex,
    eval_f,
    ls_v,
    neighbors,
    random_initial,
)
from pathnash.oracle import enumerate_equilibria, solve_exact

HALF = (F(1, 2), F(1, 2))


def simplex_grid(n, den):
    for c in product(range(den + 1), repeat=n - 1):
        if sum(c) <= den:
            yield tuple(F(v, den) for v in c) + (F(den - sum(c), den),)


def test_eval_f_matching_pennies():
    f = eval_f(matching_pennies(), 1, HALF)
    assert f.value == 0 and f.witness == HALF
    assert eval_f(matching_pennies(), 1, (1, 0)).value > 0


def test_eval_f_random_3x3_against_grid_and_oracle():
    for seed in range(6):
        g = generate(GenSpec("random", 3, 3, seed=seed))
        for p in enumerate_equilibria(g):
            f = eval_f(g, 1, p.x1)
            assert f.value == 0
            assert verify_ne(g, StrategyProfile(p.x1, f.witness))
        rng = random.Random(seed)
        for _ in range(3):
            x = tuple(F(v, 6) for v in _composition(rng, 3, 6))
            f = eval_f(g, 1, x)
            assert epsilon(g, StrategyProfile(x, f.witness)) == f.value
            assert all(f.value <= epsilon(g, StrategyProfile(x, y)) for y in simplex_grid(3, 12))


def _composition(rng, n, total):
    cuts = sorted(rng.randint(0, total) for _ in range(n - 1))
    edges = [0] + cuts + [total]
    return [edges[i + 1] - edges[i] for i in range(n)]


def test_eval_f_agent_two():
    g = matching_pennies()
    assert eval_f(g, 2, HALF).value == 0
    with pytest.raises(ValueError):
        eval_f(g, 2, (1, 0, 0))


def test_two_actions_two_neighbors():
    g = generate(GenSpec("random", 2, 4, seed=1))
    v = random_initial(g, 1, 0)
    assert len(list(neighbors(v))) == 2


def test_reverse_pivot_returns():
    g = generate(GenSpec("random", 3, 3, seed=2))
    v = random_initial(g, 1, 5)
    for nb in neighbors(v):
        back = [w for w in neighbors(nb) if w.key == v.key]
        assert back and back[0].vertex == v.vertex


def brute_force_vertices(g):
    """Vertices of {x >= 0, U2^T x <= 1} as frozensets of tight constraint ids."""
    u = positive_shift(g).u2
    m1, m2 = g.m1, g.m2
    out = {}
    for tight in combinations(range(m1 + m2), m1):
        M, rhs = [], []
        for t in tight:
            if t < m1:
                M.append([F(int(a == t)) for a in range(m1)])
                rhs.append(F(0))
            else:
                M.append([u[a][t - m1] for a in range(m1)])
                rhs.append(F(1))
        x = solve_exact(M, rhs)
        if x is None or any(q < 0 for q in x):
            continue
        if all(sum(u[a][b] * x[a] for a in range(m1)) <= 1 for b in range(m2)):
            out[frozenset(tight)] = tuple(x)
    return out


def tight_ids(v, m1):
    ids = set()
    for var in v.tableau.nonbasic:
        ids.add(var.index if var.kind == "x" else m1 + var.index)
    return frozenset(ids)


def test_neighbors_match_geometric_adjacency():
    g = generate(GenSpec("random", 3, 3, seed=4))
    verts = brute_force_vertices(g)
    seen = {}
    frontier = [artificial_vertex(g, 1)]
    while frontier:
        v = frontier.pop()
        k = tight_ids(v, 3)
        if k in seen:
            continue
        seen[k] = v
        frontier.extend(neighbors(v))
    assert set(seen) == set(verts)
    for k, v in seen.items():
        expected = {o for o in verts if len(o & k) == 2}
        assert {tight_ids(n, 3) for n in neighbors(v)} == expected


def test_zero_steps_is_artificial():
    g = matching_pennies()
    v = random_initial(g, 1, 0, steps=0)
    assert v.vertex == (0, 0) and v.strategy is None


def test_random_initial_feasible():
    g = generate(GenSpec("random", 4, 3, seed=6))
    for seed in range(30):
        v = random_initial(g, 1, seed)
        assert all(val >= 0 for val in v.tableau.basic_solution().values())
        assert v.strategy is not None


def test_random_initial_covers_2x2():
    g = generate(GenSpec("random", 2, 2, seed=3))
    nonzero = {k for k, x in brute_force_vertices(g).items() if any(x)}
    hit = {tight_ids(random_initial(g, 1, s), 2) for s in range(100)}
    assert hit == nonzero


def test_tabu_exhausts():
    g = matching_pennies()
    tabu = set()
    with pytest.raises(TabuExhausted):
        for s in range(50):
            random_initial(g, 1, s, tabu, retries=5)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("h", ["BI", "FI", "FIR"])
def test_matching_pennies_any_start(seed, h):
    rep = ls_v(matching_pennies(), LSVConfig(heuristic=h, seed=seed))
    assert rep.exact and rep.profile == StrategyProfile(HALF, HALF)


def test_dominant_pure():
    rep = ls_v(dominant(), LSVConfig(seed=1))
    assert rep.profile == StrategyProfile((0, 1), (1, 0))


def test_random_5x5_fir():
    for g in corpus("random", [5], 20, seed=700):
        rep = ls_v(g, LSVConfig(seed=2, deadline=2.0))
        assert rep.metrics.eps == epsilon(g, rep.profile)
        if rep.exact:
            assert verify_ne(g, rep.profile)


def test_deadline_zero_reports_honest_eps():
    g = generate(GenSpec("random", 6, 6, seed=1))
    rep = ls_v(g, LSVConfig(deadline=0))
    assert rep.metrics.eps == epsilon(g, rep.profile)


def test_non_square_searches_smaller_agent():
    g = generate(GenSpec("random", 5, 2, seed=2))
    rep = ls_v(g, LSVConfig(heuristic="FI"))
    assert rep.info["agent"] == 2
    assert rep.exact


def test_config_validation():
    with pytest.raises(ValueError):
        LSVConfig(heuristic="XX")
    with pytest.raises(ValueError):
        LSVConfig(cutoff=0)
