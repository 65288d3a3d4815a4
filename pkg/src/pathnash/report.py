"""Solver results and wall-clock budgets."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .game import BimatrixGame, SolutionMetrics, StrategyProfile, metrics, uniform


class Deadline:
    """Wall-clock budget measured with ``time.monotonic``; ``None`` never expires."""

    def __init__(self, seconds: float | None):
        self.seconds = seconds
        self.end = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.end is not None and time.monotonic() >= self.end

    @classmethod
    def of(cls, d: "Deadline | float | None") -> "Deadline":
        return d if isinstance(d, Deadline) else cls(d)


class BestTracker:
    """Keeps the lowest-epsilon profile seen, measured on the original game."""

    def __init__(self, game: BimatrixGame):
        self.game = game
        self.eps: Fraction | None = None
        self.profile: StrategyProfile | None = None
        self.history: list[Fraction] = []

    def offer(self, p: StrategyProfile) -> Fraction:
        e = metrics(self.game, p).eps
        if self.eps is None or e < self.eps:
            self.eps, self.profile = e, p
        self.history.append(self.eps)
        return e

    def fallback(self) -> StrategyProfile:
        if self.profile is not None:
            return self.profile
        return StrategyProfile(uniform(self.game.m1), uniform(self.game.m2))


@dataclass
class SolveReport:
    algorithm: str
    outcome: str  # "exact", "approx" or "timeout"
    profile: StrategyProfile
    metrics: SolutionMetrics
    steps: int = 0
    restarts: int = 0
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.outcome == "exact"

    @classmethod
    def build(cls, algorithm: str, game: BimatrixGame, profile: StrategyProfile, *,
              timed_out: bool = False, **kw) -> "SolveReport":
        m = metrics(game, profile)
        if m.eps == 0:
            outcome = "exact"
        else:
            outcome = "timeout" if timed_out else "approx"
        return cls(algorithm, outcome, profile, m, **kw)
