import random
import statistics

import pytest

from pathnash.game import normalize, verify_ne
from pathnash.generators import KINDS, GenSpec, InvalidSpec, gaussian_pairs, generate
from pathnash.lemke import RRLConfig, rr_l
from pathnash.lh import RestartConfig, all_paths, rr_lh
from pathnash.lsv import LSVConfig, ls_v
from pathnash.oracle import enumerate_equilibria
from pathnash.perturb import ip_lh


@pytest.mark.parametrize("kind", KINDS)
def test_deterministic_and_normalized(kind):
    a = generate(GenSpec(kind, 3, 4, seed=5))
    assert a == generate(GenSpec(kind, 3, 4, seed=5))
    assert a.normalized and normalize(a).same_payoffs(a)
    for u in (a.u1, a.u2):
        vals = [e for row in u for e in row]
        assert min(vals) >= 0 and max(vals) <= 1


def test_seed_changes_game():
    assert generate(GenSpec("random", 3, 3, seed=1)) != generate(GenSpec("random", 3, 3, seed=2))


@pytest.mark.parametrize("spec", [
    GenSpec("nope"), GenSpec(m1=0), GenSpec("covariant", rho=2.0),
])
def test_invalid(spec):
    with pytest.raises(InvalidSpec):
        generate(spec)


def test_dominant_unique_pure_found_by_every_solver():
    g = generate(GenSpec("dominant", 2, 2, seed=3))
    ne = enumerate_equilibria(g)
    assert len(ne) == 1 and all(max(p.x1) == 1 and max(p.x2) == 1 for p in ne)
    outs = [rec.profile for rec in all_paths(g)]
    outs.append(rr_lh(g, RestartConfig()).profile)
    outs.append(rr_l(g, RRLConfig()).profile)
    outs.append(ls_v(g, LSVConfig()).profile)
    outs.append(ip_lh(g, seed=0, max_iter=3)[0].profile)
    assert all(p == ne[0] for p in outs)


def test_coordination_three_equilibria():
    assert len(enumerate_equilibria(generate(GenSpec("coordination", 2, 2)))) == 3


def test_covariant_negative_correlation():
    g = generate(GenSpec("covariant", 3, 3, rho=-1.0, seed=0))
    ne = enumerate_equilibria(g)
    assert ne and all(verify_ne(g, p) for p in ne)
    pairs = gaussian_pairs(random.Random(0), -1.0, 10_000)
    r = statistics.correlation([a for a, _ in pairs], [b for _, b in pairs])
    assert r < -0.95


def test_covariant_positive_correlation():
    pairs = gaussian_pairs(random.Random(1), 0.8, 10_000)
    r = statistics.correlation([a for a, _ in pairs], [b for _, b in pairs])
    assert 0.75 < r < 0.85


def test_degenerate_has_duplicates():
    g = generate(GenSpec("degenerate", 4, 4, seed=1))
    rows = [(g.u1[j], g.u2[j]) for j in range(4)]
    assert len(set(rows)) < 4
