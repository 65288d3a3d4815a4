"""Lemke-Howson path following, rrLH restarts and path-length statistics."""
from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .game import (
    BimatrixGame,
    StrategyProfile,
    integer_payoffs,
    normalize_strategy,
    positive_shift,
    transpose,
)
from .kernel import Tableau, Unbounded, Var, identity_tableau
from .report import BestTracker, Deadline, SolveReport


class RayTermination(AssertionError):
    """LH found no leaving variable; impossible on strictly positive games."""


class LHSystem:
    """The two best-response polytopes as integer tableaux.

    Tableau 1 describes agent 1's polytope ``U2^T x1 + s2 = 1`` (one row
    per agent-2 action), tableau 2 describes ``U1 x2 + s1 = 1``.  The
    payoffs are shifted to be positive and scaled to integers first; neither
    changes the normalized vertices.
    """

    def __init__(self, game: BimatrixGame):
        self.game = game
        shifted = positive_shift(game)
        _, A1 = integer_payoffs(shifted.u1)
        _, A2 = integer_payoffs(shifted.u2)
        m1, m2 = game.m1, game.m2
        self.m1, self.m2 = m1, m2
        self._x = ([Var("x", 1, a) for a in range(m1)], [Var("x", 2, b) for b in range(m2)])
        self._s = ([Var("s", 1, a) for a in range(m1)], [Var("s", 2, b) for b in range(m2)])
        self._proto = (
            identity_tableau(transpose(A2), [1] * m2, self._x[0], self._s[1]),
            identity_tableau(A1, [1] * m1, self._x[1], self._s[0]),
        )

    @property
    def labels(self) -> range:
        return range(1, self.m1 + self.m2 + 1)

    def label_var(self, label: int) -> Var:
        if not 1 <= label <= self.m1 + self.m2:
            raise ValueError(f"label {label} outside 1..{self.m1 + self.m2}")
        if label <= self.m1:
            return Var("x", 1, label - 1)
        return Var("x", 2, label - self.m1 - 1)

    def var_label(self, var: Var) -> int:
        return var.index + 1 if var.agent == 1 else self.m1 + var.index + 1

    def fresh(self) -> tuple[Tableau, Tableau]:
        return self._proto[0].copy(), self._proto[1].copy()

    def refactor(self, basis1: Sequence[Var], basis2: Sequence[Var]) -> tuple[Tableau, Tableau]:
        """Rebuild both tableaux for stored bases by exact refactorization."""
        out = []
        for proto, basis in zip(self._proto, (basis1, basis2)):
            A = [row[:-1] for row in proto.entries]
            b = [row[-1] for row in proto.entries]
            lex = [proto.columns[j] for j in proto.lex_order]
            out.append(Tableau.from_system(A, b, proto.columns, basis, lex_vars=lex))
        return out[0], out[1]

    @staticmethod
    def side(var: Var) -> int:
        """Index of the tableau that owns ``var``."""
        if var.kind == "x":
            return 0 if var.agent == 1 else 1
        return 1 if var.agent == 1 else 0

    def profile(self, t1: Tableau, t2: Tableau) -> StrategyProfile | None:
        xt1 = [t1.value(v) for v in self._x[0]]
        xt2 = [t2.value(v) for v in self._x[1]]
        if not any(xt1) or not any(xt2):
            return None
        return StrategyProfile(normalize_strategy(xt1), normalize_strategy(xt2))


@dataclass
class LHState:
    """Saved position on a path: both bases and the next entering variable."""

    basis1: tuple[Var, ...]
    basis2: tuple[Var, ...]
    entering: Var
    steps: int


@dataclass
class LHPathRecord:
    initial_label: int
    steps: int
    outcome: str  # "equilibrium", "cutoff" or "timeout"
    profile: StrategyProfile | None = None
    saved: LHState | None = None
    pivots: int = 0
    bases: list[tuple[frozenset, frozenset]] | None = None
    final: tuple[Tableau, Tableau] | None = field(default=None, repr=False)


def lh_solve(
    game: BimatrixGame,
    label: int,
    step_limit: int | None = None,
    resume: LHState | None = None,
    *,
    deadline: Deadline | float | None = None,
    tracker: BestTracker | None = None,
    record_bases: bool = False,
    system: LHSystem | None = None,
) -> LHPathRecord:
    """Follow the LH path of ``label`` (1-based: agent 1's actions first).

    ``step_limit`` caps the pivots made by this call; when it is reached the
    record carries a :class:`LHState` that ``resume`` accepts.
    """
    sysm = system or LHSystem(game)
    deadline = Deadline.of(deadline)
    start = sysm.label_var(label)
    if resume is not None:
        tabs = sysm.refactor(resume.basis1, resume.basis2)
        entering, steps = resume.entering, resume.steps
    else:
        tabs = sysm.fresh()
        entering, steps = start, 0
    done = {start, start.complement("s")}
    bases = [] if record_bases else None
    pivots = 0

    def stop(outcome: str) -> LHPathRecord:
        saved = LHState(tuple(tabs[0].basis), tuple(tabs[1].basis), entering, steps)
        return LHPathRecord(label, steps, outcome, None, saved, pivots, bases)

    while True:
        if step_limit is not None and pivots >= step_limit:
            return stop("cutoff")
        if deadline.expired():
            return stop("timeout")
        tab = tabs[sysm.side(entering)]
        try:
            leaving = tab.min_ratio_leaving(entering)
        except Unbounded as exc:
            raise RayTermination(str(exc)) from exc
        tab.pivot(entering, leaving)
        steps += 1
        pivots += 1
        if bases is not None:
            bases.append((tabs[0].basis_key(), tabs[1].basis_key()))
        if leaving in done:
            prof = sysm.profile(*tabs)
            if tracker is not None:
                tracker.offer(prof)
            return LHPathRecord(label, steps, "equilibrium", prof, None, pivots, bases, tabs)
        if tracker is not None:
            p = sysm.profile(*tabs)
            if p is not None:
                tracker.offer(p)
        entering = leaving.complement("s")


@dataclass
class RestartConfig:
    cutoff0: int = 20
    seed: int = 0
    deadline: float | None = None  # seconds
    track_best: bool = False

    def __post_init__(self):
        if self.cutoff0 < 1:
            raise ValueError("cutoff0 must be >= 1")


def rr_lh(game: BimatrixGame, cfg: RestartConfig | None = None) -> SolveReport:
    """LH with random restarts over labels and an iteratively deepened cutoff.

    A path interrupted at the cutoff is resumed from its saved basis the next
    time it is drawn, so no pivot is ever repeated.
    """
    cfg = cfg or RestartConfig()
    rng = random.Random(cfg.seed)
    sysm = LHSystem(game)
    deadline = Deadline(cfg.deadline)
    tracker = BestTracker(game) if (cfg.track_best or cfg.deadline is not None) else None
    depth = {l: 0 for l in sysm.labels}
    saved: dict[int, LHState] = {}
    cutoff = cfg.cutoff0
    pivots = restarts = 0
    draws: list[int] = []
    while True:
        candidates = [l for l in sysm.labels if depth[l] < cutoff]
        if not candidates:
            cutoff += cfg.cutoff0
            continue
        label = rng.choice(candidates)
        draws.append(label)
        rec = lh_solve(
            game, label, cutoff - depth[label], saved.get(label),
            deadline=deadline, tracker=tracker, system=sysm,
        )
        pivots += rec.pivots
        info = {"cutoff": cutoff, "labels": draws, "label": label}
        if tracker is not None:
            info["best_history"] = tracker.history
        if rec.outcome == "equilibrium":
            return SolveReport.build("rrlh", game, rec.profile, steps=pivots,
                                     restarts=restarts, info=info)
        depth[label] = rec.steps
        saved[label] = rec.saved
        if rec.outcome == "timeout":
            return SolveReport.build("rrlh", game, tracker.fallback(), timed_out=True,
                                     steps=pivots, restarts=restarts, info=info)
        restarts += 1


# -- path statistics ------------------------------------------------------------


@dataclass(frozen=True)
class PathStats:
    lengths: tuple[int, ...]
    mean: Fraction
    median: Fraction
    q1: Fraction
    q3: Fraction
    min: Fraction
    max: Fraction
    kurtosis: Fraction | None  # None when the second central moment is 0

    @classmethod
    def from_lengths(cls, lengths: Sequence[int]) -> "PathStats":
        data = sorted(Fraction(v) for v in lengths)
        if not data:
            raise ValueError("no path lengths")
        mean = sum(data, Fraction(0)) / len(data)
        if len(data) > 1:
            q1, med, q3 = statistics.quantiles(data, n=4, method="inclusive")
        else:
            q1 = med = q3 = data[0]
        return cls(tuple(int(v) for v in lengths), mean, Fraction(med), Fraction(q1),
                   Fraction(q3), data[0], data[-1], kurtosis(data))


def central_moment(data: Sequence[Fraction], k: int) -> Fraction:
    mean = sum(data, Fraction(0)) / len(data)
    return sum(((v - mean) ** k for v in data), Fraction(0)) / len(data)


def kurtosis(data: Sequence) -> Fraction | None:
    """mu4 / mu2**2 over the population, or None when mu2 == 0."""
    data = [Fraction(v) for v in data]
    mu2 = central_moment(data, 2)
    if mu2 == 0:
        return None
    return central_moment(data, 4) / mu2**2


def all_paths(game: BimatrixGame, **kw) -> list[LHPathRecord]:
    sysm = LHSystem(game)
    return [lh_solve(game, l, system=sysm, **kw) for l in sysm.labels]


def enumerate_paths(game: BimatrixGame) -> PathStats:
    """Run LH from every label and summarize the path lengths."""
    return PathStats.from_lengths([r.steps for r in all_paths(game)])


# -- restart policy -----------------------------------------------------------------


def success_probability(cutoff, res: int, length) -> Fraction:
    """Chance that ``res`` blind restarts with budget ``cutoff`` reach the end."""
    return 1 - (1 - Fraction(cutoff) / Fraction(length)) ** res


def restarts_needed(cutoff, length, p) -> float:
    """res = log(1-p) / log(1-cutoff/l); grows like -l log(1-p)/cutoff."""
    c, l = float(cutoff), float(length)
    if c >= l:
        return 1.0
    return math.log(1 - float(p)) / math.log(1 - c / l)


def restart_policy_optimum(length: int, p) -> tuple[Fraction, int]:
    """Optimal blind restart policy for one path of ``length`` steps."""
    p = Fraction(p)
    if not 0 < p < 1 or length < 1:
        raise ValueError("need 0 < p < 1 and length >= 1")
    return length * p, 1
