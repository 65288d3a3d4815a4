"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check is exact (rational arithmetic, no tolerance) except the two
pinned below: the grid resolution of the restart-policy search and the
exponent bound of the scaling fit.
"""
import io
import math
import random
import statistics
from fractions import Fraction

import pytest

from oracles import population_kurtosis, random_pivot_run, restart_grid_optimum
from pathnash.cli import main
from pathnash.game import epsilon, verify_ne
from pathnash.gamefile import save_game
from pathnash.generators import GenSpec, generate
from pathnash.lemke import RRLConfig, dyadic_simplex_point, lemke_solve, rr_l
from pathnash.lh import (
    LHSystem,
    PathStats,
    RestartConfig,
    enumerate_paths,
    lh_solve,
    restart_policy_optimum,
    rr_lh,
)
from pathnash.lsv import LSVConfig, ls_v
from pathnash.oracle import enumerate_equilibria, smallest_support_size
from pathnash.perturb import PerturbSpec, ip_lh, perturb, theorem1_check

# pinned tolerances
GRID_RESOLUTION = 1  # criterion 5: |cutoff - l*p| < one grid step
MAX_EXPONENT = 2.0  # criterion 9: log-log slope must stay below this

CORPUS_SEED = 20240601
LEMKE_STARTS = 5
LSV_MAX_RESTARTS = 50
DEGENERATE_SIZES = (3, 4, 5, 6)
SCALING_SIZES = (5, 10, 15, 20)
SCALING_GAMES = 12
SCALING_RUNS = 3
IPLH_ITERS = 5
DELTAS = (Fraction(1, 8), Fraction(1, 32), Fraction(1, 128))


@pytest.fixture
def verdict(capsys):
    def emit(n: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\nCRITERION {n} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {n} failed: {detail}"

    return emit


def build_corpus():
    rng = random.Random(CORPUS_SEED)
    games = []
    for kind, count in (("random", 200), ("degenerate", 20), ("covariant", 20)):
        for i in range(count):
            games.append(generate(GenSpec(kind, rng.randint(2, 6), rng.randint(2, 6), seed=i)))
    return games


@pytest.fixture(scope="module")
def corpus():
    return build_corpus()


@pytest.fixture(scope="module")
def solver_runs(corpus):
    """Per game: list of (solver, profile) for every run that terminated exactly."""
    runs = []
    for gi, g in enumerate(corpus):
        out = []
        sysm = LHSystem(g)
        for label in sysm.labels:
            rec = lh_solve(g, label, system=sysm)
            out.append((f"lh[{label}]", rec.profile))
        out.append(("rrlh", rr_lh(g, RestartConfig(seed=gi)).profile))
        rng = random.Random(gi)
        for s in range(LEMKE_STARTS):
            x1, x2 = dyadic_simplex_point(rng, g.m1), dyadic_simplex_point(rng, g.m2)
            res = lemke_solve(g, x1, x2, track_metrics=False)
            if res.outcome == "equilibrium":
                out.append((f"lemke[{s}]", res.profile))
        out.append(("rrl", rr_l(g, RRLConfig(seed=gi)).profile))
        rep = ls_v(g, LSVConfig(seed=gi, max_restarts=LSV_MAX_RESTARTS))
        if rep.exact:
            out.append(("lsv", rep.profile))
        runs.append(out)
    return runs


def test_criterion_1_exactness(corpus, solver_runs, verdict):
    bad = [(gi, name) for gi, out in enumerate(solver_runs) for name, p in out
           if p is None or epsilon(corpus[gi], p) != 0]
    n_runs = sum(len(o) for o in solver_runs)
    verdict(1, "every terminating run has eps = 0 exactly", not bad,
            f"{n_runs} runs on {len(corpus)} games, {len(bad)} nonzero")


def test_criterion_2_oracle_equivalence(corpus, solver_runs, verdict):
    missing, oracle_bad = [], 0
    for gi, (g, out) in enumerate(zip(corpus, solver_runs)):
        ne = enumerate_equilibria(g)
        oracle_bad += sum(not verify_ne(g, p) for p in ne)
        missing += [(gi, name) for name, p in out if p not in ne]
    verdict(2, "solver equilibria appear in the oracle list; oracle outputs verify",
            not missing and oracle_bad == 0,
            f"{len(missing)} missing, {oracle_bad} oracle outputs failing")


def test_criterion_3_perturbation_bound(verdict):
    failures = []
    for i in range(100):
        g = generate(GenSpec("random", 2 + i % 5, 2 + (i // 5) % 5, seed=5000 + i))
        delta = DELTAS[i % 3]
        gp = perturb(g, PerturbSpec(delta, seed=i))
        ne = lh_solve(gp, 1 + i % (g.m1 + g.m2)).profile
        eps, bound, ok = theorem1_check(g, gp, ne)
        if not (ok and eps <= 2 * delta):
            failures.append(i)
    verdict(3, "perturbed equilibria satisfy eps <= 2*delta", not failures,
            f"100 pairs, {len(failures)} failures")


def test_criterion_4_iplh(corpus, verdict):
    problems = []
    for gi, g in enumerate(corpus):
        _, state = ip_lh(g, seed=gi, max_iter=IPLH_ITERS)
        deltas = [d for d, _, _ in state.iterations]
        if deltas[0] != Fraction(1, 8):
            problems.append((gi, "first delta"))
        if any(b != a / 2 for a, b in zip(deltas, deltas[1:])):
            problems.append((gi, "halving"))
        if any(b > a for a, b in zip(state.history, state.history[1:])):
            problems.append((gi, "monotone"))
        if state.best_eps > 2 * state.final_delta:
            problems.append((gi, "final bound"))
    verdict(4, "ip-LH starts at 1/8, halves delta, best eps is monotone and <= 2*final delta",
            not problems, f"{len(corpus)} games, {len(problems)} problems")


def test_criterion_5_restart_policy(verdict):
    bad = []
    for l in (10, 100, 1000):
        for p in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)):
            _, cutoff, res = restart_grid_optimum(l, p)
            opt_cutoff, opt_res = restart_policy_optimum(l, p)
            if res != opt_res or abs(cutoff - opt_cutoff) >= GRID_RESOLUTION:
                bad.append((l, p, cutoff, res))
    verdict(5, "grid optimum matches cutoff = l*p, res = 1", not bad, f"9 cells, mismatches {bad}")


def test_criterion_6_kurtosis(verdict):
    constant = enumerate_paths(generate(GenSpec("coordination", 3, 3)))
    hand = PathStats.from_lengths([1, 1, 1, 5]).kurtosis
    ok = (set(constant.lengths) == {2} and constant.kurtosis is None
          and hand == Fraction(7, 3) == population_kurtosis([1, 1, 1, 5]))
    verdict(6, "kurtosis undefined on constant paths, 7/3 on {1,1,1,5}", ok,
            f"constant -> {constant.kurtosis}, hand -> {hand}")


def test_criterion_7_degenerate(verdict):
    problems = []
    for i in range(20):
        m1 = DEGENERATE_SIZES[i % 4]
        m2 = DEGENERATE_SIZES[(i // 4) % 4]
        g = generate(GenSpec("degenerate", m1, m2, seed=900 + i))
        limit = 10 * (m1 + m2) ** 2
        for label in range(1, m1 + m2 + 1):
            rec = lh_solve(g, label, step_limit=limit, record_bases=True)
            if rec.outcome != "equilibrium" or len(set(rec.bases)) != len(rec.bases):
                problems.append((i, "lh", label))
        rng = random.Random(i)
        starts = [([int(a == 0) for a in range(m1)], [int(b == 0) for b in range(m2)])]
        starts += [(dyadic_simplex_point(rng, m1), dyadic_simplex_point(rng, m2)) for _ in range(4)]
        for k, (x1, x2) in enumerate(starts):
            res = lemke_solve(g, x1, x2, limit, record_bases=True, track_metrics=False)
            if res.outcome != "equilibrium" or len(set(res.bases)) != len(res.bases):
                problems.append((i, "lemke", k))
    verdict(7, "LH and Lemke terminate within 10(m1+m2)^2 pivots without repeating a basis",
            not problems, f"20 games, problems {problems[:5]}")


def test_criterion_8_kernel_oracle(verdict):
    rng = random.Random(8)
    mismatches = 0
    for _ in range(1000):
        t, ref = random_pivot_run(rng, rng.randint(1, 5), rng.randint(1, 6), rng.randint(1, 10))
        mismatches += t.basic_solution() != ref.solution()
    verdict(8, "1000 integer pivot sequences equal rational pivoting", mismatches == 0,
            f"{mismatches} mismatches")


def test_criterion_9_scaling(verdict):
    medians = {}
    for m in SCALING_SIZES:
        pivots, seed = [], 0
        while len(pivots) < SCALING_GAMES * SCALING_RUNS:
            g = generate(GenSpec("random", m, m, seed=1000 * m + seed))
            seed += 1
            if smallest_support_size(g, max_support=2) is None:
                continue
            pivots += [rr_lh(g, RestartConfig(seed=s)).steps for s in range(SCALING_RUNS)]
        medians[m] = statistics.median(pivots)
    fit = statistics.linear_regression([math.log(m) for m in medians],
                                       [math.log(v) for v in medians.values()])
    verdict(9, "median rrLH pivots grow sub-quadratically", fit.slope < MAX_EXPONENT,
            f"medians {medians}, exponent {fit.slope:.3f}")


def _cli(argv) -> bytes:
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return f"{code}\n{out.getvalue()}".encode()


def test_criterion_10_determinism(tmp_path, verdict):
    game = tmp_path / "g.json"
    save_game(generate(GenSpec("random", 4, 5, seed=3)), game)
    prof = tmp_path / "p.json"
    prof.write_text('{"x1": ["1", "0", "0", "0"], "x2": ["1", "0", "0", "0", "0"]}')
    commands = [["solve", game, "--alg", a, "--seed", 11]
                for a in ("lh", "rrlh", "lemke", "rrl", "lsv", "iplh")]
    commands += [["paths", game], ["paths", game, "--format", "json"],
                 ["gen", "--kind", "covariant", "--m1", 4, "--seed", 2],
                 ["verify", game, prof], ["oracle", game]]
    differing = [c[0] for c in commands if _cli(c) != _cli(c)]
    bench = []
    for workers in (1, 2, 3):
        out = tmp_path / f"bench{workers}.csv"
        main(["bench", "--gen", "random:4x4", "--count", "5", "--algs", "rrlh,rrl,lsv,iplh",
              "--seed", "3", "--workers", str(workers), "--out", str(out)], io.StringIO())
        bench.append(out.read_bytes())
    same_bench = all(b == bench[0] for b in bench)
    verdict(10, "reruns with identical seeds are byte-identical at any pool size",
            not differing and same_bench,
            f"differing commands {differing}, bench identical across 1/2/3 workers: {same_bench}")
