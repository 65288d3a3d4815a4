"""Payoff perturbation, the 2*delta approximation bound and anytime ip-LH."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .game import BimatrixGame, StrategyProfile, epsilon, verify_ne
from .lh import lh_solve
from .report import BestTracker, Deadline, SolveReport


class NotAnEquilibrium(ValueError):
    pass


@dataclass(frozen=True)
class PerturbSpec:
    delta: Fraction
    seed: int = 0
    grid_bits: int = 24

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.delta < 0:
            raise ValueError("delta must be >= 0")


def perturb(g: BimatrixGame, spec: PerturbSpec) -> BimatrixGame:
    """Add an independent offset, uniform on the 2**-grid_bits grid in [-delta, delta], to every payoff."""
    rng = random.Random(spec.seed)
    D = 1 << spec.grid_bits
    K = int(spec.delta * D)  # floor: offsets never exceed delta

    def jitter(u):
        return tuple(
            tuple(e + Fraction(rng.randint(-K, K), D) for e in row) for row in u
        )

    if K == 0:
        return BimatrixGame(g.u1, g.u2, False, g.name)
    u1 = jitter(g.u1)
    u2 = jitter(g.u2)
    return BimatrixGame(u1, u2, False, g.name)


def max_deviation(g: BimatrixGame, h: BimatrixGame) -> Fraction:
    """max over both agents of the entrywise max |U_i - U'_i|."""
    return max(
        abs(a - b)
        for u, v in ((g.u1, h.u1), (g.u2, h.u2))
        for ra, rb in zip(u, v)
        for a, b in zip(ra, rb)
    )


def theorem1_check(
    g: BimatrixGame, g_pert: BimatrixGame, ne_pert: StrategyProfile
) -> tuple[Fraction, Fraction, bool]:
    """Epsilon of a perturbed-game equilibrium on the original game vs 2*delta.

    delta is the actual largest payoff deviation between the two games.
    """
    if not verify_ne(g_pert, ne_pert):
        raise NotAnEquilibrium("profile is not an equilibrium of the perturbed game")
    eps = epsilon(g, ne_pert)
    bound = 2 * max_deviation(g, g_pert)
    return eps, bound, eps <= bound


@dataclass
class IpLhState:
    """k is the exponent of the next delta; ``iterations`` logs
    (delta, LH steps, epsilon on the original game of the perturbed
    equilibrium or None if LH was interrupted)."""

    k: int = 3
    best: StrategyProfile | None = None
    best_eps: Fraction | None = None
    iterations: list[tuple[Fraction, int, Fraction | None]] = field(default_factory=list)
    history: list[Fraction] = field(default_factory=list)

    @property
    def delta(self) -> Fraction:
        return Fraction(1, 2**self.k)

    @property
    def final_delta(self) -> Fraction | None:
        return self.iterations[-1][0] if self.iterations else None


def ip_lh(
    g: BimatrixGame,
    deadline: float | None = None,
    seed: int = 0,
    *,
    max_iter: int | None = None,
    label: int | None = 1,
    grid_bits: int = 24,
) -> tuple[SolveReport, IpLhState]:
    """Solve ever less perturbed copies of ``g`` with LH until the deadline.

    Iteration t uses delta = 2**-(3+t).  ``label=None`` draws a random label
    each iteration.  Without a deadline, ``max_iter`` must bound the loop.
    The loop also ends once delta drops below the perturbation grid, since
    every later game would equal ``g``.  Vertices visited on an interrupted
    path still count towards the best profile.
    """
    if deadline is None and max_iter is None:
        raise ValueError("ip_lh needs a deadline or max_iter")
    clock = Deadline(deadline)
    rng = random.Random(seed)
    state = IpLhState()
    pivots = 0
    while not clock.expired() and (max_iter is None or len(state.iterations) < max_iter):
        delta = state.delta
        gp = perturb(g, PerturbSpec(delta, rng.getrandbits(64), grid_bits))
        lab = label if label is not None else rng.randint(1, g.m1 + g.m2)
        tracker = BestTracker(g)
        rec = lh_solve(gp, lab, deadline=clock, tracker=tracker)
        pivots += rec.pivots
        ne_eps = epsilon(g, rec.profile) if rec.outcome == "equilibrium" else None
        if tracker.eps is not None and (state.best_eps is None or tracker.eps < state.best_eps):
            state.best_eps, state.best = tracker.eps, tracker.profile
        state.iterations.append((delta, rec.steps, ne_eps))
        if state.best_eps is not None:
            state.history.append(state.best_eps)
        if rec.outcome != "equilibrium" or delta * (1 << grid_bits) < 1:
            break
        state.k += 1
    profile = state.best if state.best is not None else BestTracker(g).fallback()
    log = [(str(d), s, None if e is None else str(e)) for d, s, e in state.iterations]
    report = SolveReport.build(
        "iplh", g, profile, timed_out=clock.expired(), steps=pivots,
        restarts=len(state.iterations),
        info={"iterations": log, "final_delta": str(state.final_delta)},
    )
    return report, state
