"""Lemke path following from an arbitrary start (x̄1, x̄2), rrL and path metrics.

Rows of the system, all variables except v nonnegative:

    sum_a x1_a + z0 = 1
    sum_b x2_b + z0 = 1
    -v1 + (U1 x2)_a + z0 (U1 x̄2)_a + w1_a = 0      for every a
    -v2 + (U2^T x1)_b + z0 (U2^T x̄1)_b + w2_b = 0  for every b

x_{i,a} and w_{i,a} are complementary.  Each basis corresponds to the
profile (x1 + z0 x̄1, x2 + z0 x̄2); the path ends when z0 leaves.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

from .game import (
    BimatrixGame,
    SolutionMetrics,
    StrategyProfile,
    best_responses,
    metrics,
    positive_shift,
)
from .kernel import SingularBasis, Tableau, Unbounded, Var
from .report import BestTracker, Deadline, SolveReport

Z0 = Var("z0")
V1, V2 = Var("v", 1), Var("v", 2)


class EmptyTrace(ValueError):
    pass


@dataclass
class LemkeStepTrace:
    z0_values: list[Fraction] = field(default_factory=list)
    step_metrics: list[SolutionMetrics] = field(default_factory=list)
    profiles: list[StrategyProfile] = field(default_factory=list)


@dataclass
class LemkeResult:
    outcome: str  # "equilibrium", "ray", "cutoff" or "timeout"
    steps: int
    profile: StrategyProfile | None
    trace: LemkeStepTrace
    initial_basis: tuple[Var, ...] = ()
    bases: list[frozenset] | None = None


def dyadic_simplex_point(rng: random.Random, n: int, bits: int = 16) -> tuple[Fraction, ...]:
    """Uniform point of the simplex on the grid 2**-bits (sorted-uniforms stick breaking)."""
    D = 1 << bits
    cuts = sorted(rng.randint(0, D) for _ in range(n - 1))
    edges = [0] + cuts + [D]
    return tuple(Fraction(edges[i + 1] - edges[i], D) for i in range(n))


class LemkeSystem:
    """Integer tableau data for one start pair; rebuilt for every start."""

    def __init__(self, game: BimatrixGame, xbar1: Sequence, xbar2: Sequence):
        self.game = game
        m1, m2 = game.m1, game.m2
        self.xbar1 = tuple(Fraction(q) for q in xbar1)
        self.xbar2 = tuple(Fraction(q) for q in xbar2)
        if len(self.xbar1) != m1 or len(self.xbar2) != m2:
            raise ValueError("start strategies do not match the game")
        h = positive_shift(game)
        U1 = h.u1
        U2t = [[h.u2[a][b] for a in range(m1)] for b in range(m2)]
        c1 = [sum((U1[a][b] * self.xbar2[b] for b in range(m2)), Fraction(0)) for a in range(m1)]
        c2 = [sum((U2t[b][a] * self.xbar1[a] for a in range(m1)), Fraction(0)) for b in range(m2)]
        L1 = lcm(*(e.denominator for row in U1 for e in row), *(c.denominator for c in c1))
        L2 = lcm(*(e.denominator for row in U2t for e in row), *(c.denominator for c in c2))

        self.x1 = [Var("x", 1, a) for a in range(m1)]
        self.x2 = [Var("x", 2, b) for b in range(m2)]
        self.w1 = [Var("w", 1, a) for a in range(m1)]
        self.w2 = [Var("w", 2, b) for b in range(m2)]
        self.columns = [Z0, V1, V2] + self.x1 + self.x2 + self.w1 + self.w2
        n = len(self.columns)
        col = {v: j for j, v in enumerate(self.columns)}
        A: list[list[int]] = []
        b: list[int] = []
        for xs in (self.x1, self.x2):
            row = [0] * n
            row[col[Z0]] = 1
            for v in xs:
                row[col[v]] = 1
            A.append(row)
            b.append(1)
        for a in range(m1):
            row = [0] * n
            row[col[V1]] = -L1
            for bb in range(m2):
                row[col[self.x2[bb]]] = int(U1[a][bb] * L1)
            row[col[Z0]] = int(c1[a] * L1)
            row[col[self.w1[a]]] = 1  # w measured in units of 1/L1
            A.append(row)
            b.append(0)
        for bb in range(m2):
            row = [0] * n
            row[col[V2]] = -L2
            for a in range(m1):
                row[col[self.x1[a]]] = int(U2t[bb][a] * L2)
            row[col[Z0]] = int(c2[bb] * L2)
            row[col[self.w2[bb]]] = 1
            A.append(row)
            b.append(0)
        self.A, self.b = A, b
        start = StrategyProfile(self.xbar1, self.xbar2)
        self.br1 = sorted(best_responses(game, start, 1))
        self.br2 = sorted(best_responses(game, start, 2))

    def initial_bases(self) -> list[tuple[list[Var], Var]]:
        """Candidate (basis, first entering variable) pairs, preferred first.

        The preferred basis holds z0, v and every best-response x except the
        lowest-index best response of agent 1, which enters first; all other
        actions have their w basic.  When ties among best responses make that
        basis singular, the fallback keeps only the lowest-index best response
        of each agent out of the w part.
        """
        a1, b1 = self.br1[0], self.br2[0]
        enter = self.x1[a1]
        full = [Z0, V1, V2]
        full += [self.x1[a] for a in self.br1 if a != a1] + [self.x2[b] for b in self.br2]
        full += [w for a, w in enumerate(self.w1) if a not in self.br1]
        full += [w for b, w in enumerate(self.w2) if b not in self.br2]
        lean = [Z0, V1, V2, self.x2[b1]]
        lean += [w for a, w in enumerate(self.w1) if a != a1]
        lean += [w for b, w in enumerate(self.w2) if b != b1]
        return [(full, enter)] if full == lean else [(full, enter), (lean, enter)]

    def initial_tableau(self) -> tuple[Tableau, Var]:
        for basis, enter in self.initial_bases():
            try:
                t = Tableau.from_system(self.A, self.b, self.columns, basis)
            except SingularBasis:
                continue
            return t, enter
        raise SingularBasis("no valid initial basis")  # pragma: no cover

    def profile(self, t: Tableau) -> tuple[Fraction, StrategyProfile]:
        z0 = t.value(Z0)
        x1 = tuple(t.value(v) + z0 * q for v, q in zip(self.x1, self.xbar1))
        x2 = tuple(t.value(v) + z0 * q for v, q in zip(self.x2, self.xbar2))
        return z0, StrategyProfile(x1, x2)


def lemke_solve(
    game: BimatrixGame,
    xbar1: Sequence,
    xbar2: Sequence,
    step_limit: int | None = None,
    *,
    schedule: Callable[[LemkeStepTrace, int], bool] | None = None,
    deadline: Deadline | float | None = None,
    tracker: BestTracker | None = None,
    track_metrics: bool = True,
    record_bases: bool = False,
) -> LemkeResult:
    """Follow the Lemke path from the start (x̄1, x̄2).

    ``schedule(trace, steps)`` may return True to abandon the path (cutoff),
    ``step_limit`` caps the number of pivots.
    """
    sysm = LemkeSystem(game, xbar1, xbar2)
    deadline = Deadline.of(deadline)
    t, entering = sysm.initial_tableau()
    initial = tuple(t.basis)
    trace = LemkeStepTrace()
    bases = [t.basis_key()] if record_bases else None

    def observe():
        z0, p = sysm.profile(t)
        trace.z0_values.append(z0)
        trace.profiles.append(p)
        if track_metrics:
            trace.step_metrics.append(metrics(game, p))
        if tracker is not None:
            tracker.offer(p)

    observe()
    steps = 0
    while True:
        if step_limit is not None and steps >= step_limit:
            return LemkeResult("cutoff", steps, None, trace, initial, bases)
        if schedule is not None and schedule(trace, steps):
            return LemkeResult("cutoff", steps, None, trace, initial, bases)
        if deadline.expired():
            return LemkeResult("timeout", steps, None, trace, initial, bases)
        try:
            leaving = t.min_ratio_leaving(entering, exclude=(V1, V2))
        except Unbounded:
            return LemkeResult("ray", steps, None, trace, initial, bases)
        t.pivot(entering, leaving)
        steps += 1
        if bases is not None:
            bases.append(t.basis_key())
        observe()
        if leaving == Z0:
            return LemkeResult("equilibrium", steps, trace.profiles[-1], trace, initial, bases)
        entering = leaving.complement("w")


# -- rrL ---------------------------------------------------------------------------

_METRICS = {"eps": lambda m: m.eps, "eps_ws": lambda m: m.eps_ws, "r": lambda m: m.regret}


def fixed_budget(budget: int) -> Callable[[LemkeStepTrace, int], bool]:
    def schedule(trace: LemkeStepTrace, steps: int) -> bool:
        return steps >= budget

    return schedule


@dataclass
class RRLConfig:
    metric: str = "eps"
    threshold: Fraction = Fraction(0)
    # schedule(trace, steps) -> True abandons the current guarded path;
    # None means a fixed budget of 20 * (m1 + m2) steps
    cutoff_schedule: Callable[[LemkeStepTrace, int], bool] | None = None
    max_guarded_restarts: int | None = None  # None means 2 * (m1 + m2)
    seed: int = 0
    deadline: float | None = None
    grid_bits: int = 16

    def __post_init__(self):
        if self.metric not in _METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.max_guarded_restarts is not None and self.max_guarded_restarts < 0:
            raise ValueError("max_guarded_restarts must be >= 0")
        self.threshold = Fraction(self.threshold)


def rr_l(game: BimatrixGame, cfg: RRLConfig | None = None) -> SolveReport:
    """Lemke with random starts, start filtering and a guarded cutoff.

    A start is followed only if its metric is >= the threshold.  After
    ``max_guarded_restarts`` draws the filter and cutoff are dropped and
    paths run to completion.
    """
    cfg = cfg or RRLConfig()
    m = game.m1 + game.m2
    guarded = 2 * m if cfg.max_guarded_restarts is None else cfg.max_guarded_restarts
    schedule = cfg.cutoff_schedule or fixed_budget(20 * m)
    score = _METRICS[cfg.metric]
    rng = random.Random(cfg.seed)
    deadline = Deadline(cfg.deadline)
    tracker = BestTracker(game)
    steps = restarts = rejected = rays = 0
    draw = 0
    while True:
        x1 = dyadic_simplex_point(rng, game.m1, cfg.grid_bits)
        x2 = dyadic_simplex_point(rng, game.m2, cfg.grid_bits)
        capped = draw < guarded
        draw += 1
        if capped and score(metrics(game, StrategyProfile(x1, x2))) < cfg.threshold:
            rejected += 1
            restarts += 1
            continue
        res = lemke_solve(game, x1, x2, schedule=schedule if capped else None,
                          deadline=deadline, tracker=tracker)
        steps += res.steps
        info = {"draws": draw, "rejected": rejected, "rays": rays, "best_history": tracker.history}
        if res.outcome == "equilibrium":
            return SolveReport.build("rrl", game, res.profile, steps=steps,
                                     restarts=restarts, info=info)
        if res.outcome == "timeout":
            return SolveReport.build("rrl", game, tracker.fallback(), timed_out=True,
                                     steps=steps, restarts=restarts, info=info)
        if res.outcome == "ray":
            rays += 1
        restarts += 1
        if deadline.expired():
            return SolveReport.build("rrl", game, tracker.fallback(), timed_out=True,
                                     steps=steps, restarts=restarts, info=info)


# -- path metrics -------------------------------------------------------------------


def decr(z0_values: Sequence[Fraction], h: int) -> Fraction:
    """(1/z0_1) * sum_{k=1..h} |z0_k - z0_{k+1}| (1-based indices)."""
    if len(z0_values) < h + 1 or h < 1:
        raise EmptyTrace(f"need at least {h + 1} values, got {len(z0_values)}")
    z = [Fraction(v) for v in z0_values]
    if z[0] <= 0:
        raise ValueError("first z0 value must be positive")
    return sum((abs(z[k] - z[k + 1]) for k in range(h)), Fraction(0)) / z[0]


def d_inf(p: StrategyProfile, q: StrategyProfile) -> Fraction:
    """Largest coordinate-wise difference between two profiles."""
    if len(p.x1) != len(q.x1) or len(p.x2) != len(q.x2):
        from .game import DimensionMismatch

        raise DimensionMismatch("profiles have different shapes")
    return max(abs(a - b) for a, b in zip(p.x1 + p.x2, q.x1 + q.x2))
