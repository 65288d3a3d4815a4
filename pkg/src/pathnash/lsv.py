"""Local search over the vertices of one agent's best-response polytope.

The objective of a vertex is the smallest epsilon reachable by any opponent
strategy while the searched agent plays the vertex's normalized strategy,
computed by an exact simplex on the integer-pivoting tableau.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Sequence

from .game import BimatrixGame, StrategyProfile, normalize_strategy
from .kernel import Tableau, Var
from .lh import LHSystem
from .report import BestTracker, Deadline, SolveReport

EPS = Var("eps")


class TabuExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class FEval:
    value: Fraction
    witness: tuple[Fraction, ...]


def _payoffs(g: BimatrixGame, agent: int):
    """(own, other) as lists indexed [own action][opponent action]."""
    if agent == 1:
        return [list(r) for r in g.u1], [list(r) for r in g.u2]
    t = lambda u: [[u[a][b] for a in range(g.m1)] for b in range(g.m2)]  # noqa: E731
    return t(g.u2), t(g.u1)


def eval_f(g: BimatrixGame, agent: int, xbar: Sequence) -> FEval:
    """Minimum epsilon over opponent strategies y with ``xbar`` fixed.

    LP:  min eps  s.t.
      (U_i y)_k - xbar^T U_i y - eps <= 0     for every own action k
      w_k - w^T y - eps <= 0                  for every opponent action k,
                                              where w = xbar^T U_{-i}
      sum y = 1,  y >= 0,  eps >= 0
    Started from a pure y with eps at its induced bound; Dantzig entering,
    lexicographic leaving.
    """
    xbar = [Fraction(q) for q in xbar]
    own, other = _payoffs(g, agent)
    n_own, n_opp = len(own), len(own[0])
    if len(xbar) != n_own:
        raise ValueError("strategy length does not match the agent")
    ux = [sum((xbar[a] * own[a][b] for a in range(n_own)), Fraction(0)) for b in range(n_opp)]
    w = [sum((xbar[a] * other[a][b] for a in range(n_own)), Fraction(0)) for b in range(n_opp)]

    ys = [Var("x", 3 - agent, b) for b in range(n_opp)]
    rs = [Var("r", 1, k) for k in range(n_own)] + [Var("r", 2, k) for k in range(n_opp)]
    columns = ys + [EPS] + rs
    nr = len(rs)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for k in range(n_own):
        rows.append([own[k][b] - ux[b] for b in range(n_opp)] + [Fraction(-1)])
        rhs.append(Fraction(0))
    for k in range(n_opp):
        rows.append([-w[b] for b in range(n_opp)] + [Fraction(-1)])
        rhs.append(-w[k])
    A, b = [], []
    for i, (row, r) in enumerate(zip(rows, rhs)):
        L = lcm(*(e.denominator for e in row), r.denominator)
        A.append([int(e * L) for e in row] + [L if j == i else 0 for j in range(nr)])
        b.append(int(r * L))
    A.append([1] * n_opp + [0] + [0] * nr)
    b.append(1)

    # feasible start: pure y = e_j, eps = largest violation, that row tight
    j = 0
    viol = [rows[i][j] - rhs[i] for i in range(nr)]
    tight = max(range(nr), key=lambda i: (viol[i], -i))
    basis = [ys[j], EPS] + [r for i, r in enumerate(rs) if i != tight]
    t = Tableau.from_system(A, b, columns, basis)
    while True:
        if not t.is_basic(EPS):
            break  # eps left the basis at value 0
        er = t.entries[t.row_of(EPS)]
        best, gain = None, 0
        for v in t.nonbasic:
            c = er[t.col_index[v]]
            if c > gain:
                best, gain = v, c
        if best is None:
            break
        t.pivot(best, t.min_ratio_leaving(best))
    witness = tuple(t.value(v) for v in ys)
    return FEval(t.value(EPS), witness)


# -- vertices -------------------------------------------------------------------


@dataclass
class VertexSolution:
    tableau: Tableau
    agent: int

    @property
    def vertex(self) -> tuple[Fraction, ...]:
        return tuple(self.tableau.value(Var("x", self.agent, a)) for a in range(self._n))

    @property
    def _n(self) -> int:
        return sum(1 for v in self.tableau.columns if v.kind == "x")

    @property
    def strategy(self) -> tuple[Fraction, ...] | None:
        xt = self.vertex
        return normalize_strategy(xt) if any(xt) else None

    @property
    def key(self) -> frozenset:
        return self.tableau.basis_key()

    def candidates(self) -> list[Var]:
        """Entering candidates, in index order (exactly m_i of them)."""
        return sorted(self.tableau.nonbasic, key=lambda v: (v.kind != "x", v.index))

    def move(self, entering: Var) -> "VertexSolution":
        t = self.tableau.copy()
        t.pivot(entering, t.min_ratio_leaving(entering))
        return VertexSolution(t, self.agent)


def searched_agent(g: BimatrixGame) -> int:
    return 1 if g.m1 <= g.m2 else 2


def artificial_vertex(g: BimatrixGame, agent: int) -> VertexSolution:
    tabs = LHSystem(g).fresh()
    return VertexSolution(tabs[agent - 1], agent)


def neighbors(
    v: VertexSolution, order: str = "FI", rng: random.Random | None = None,
    max_n: int | None = None,
) -> Iterator[VertexSolution]:
    """Adjacent bases: BI and FI in index order, FIR shuffled and capped at ``max_n``."""
    cands = v.candidates()
    if order == "FIR":
        rng = rng or random.Random(0)
        rng.shuffle(cands)
        if max_n is not None:
            cands = cands[:max_n]
    elif order not in ("BI", "FI"):
        raise ValueError(f"unknown heuristic {order!r}")
    for e in cands:
        yield v.move(e)


def random_initial(
    g: BimatrixGame,
    agent: int,
    seed: int | random.Random,
    tabu: set | None = None,
    steps: int | None = None,
    retries: int = 50,
) -> VertexSolution:
    """Random walk of random pivots from the artificial vertex.

    The walk length is uniform in [1, 2 * m_{-i}] unless ``steps`` is given;
    with ``steps=0`` the artificial vertex itself is returned.  Otherwise the
    walk continues past the artificial vertex.  Bases in ``tabu`` are
    rejected and recorded on success.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    start = artificial_vertex(g, agent)
    if steps == 0:
        return start
    n_opp = g.m2 if agent == 1 else g.m1
    for _ in range(retries):
        k = steps if steps is not None else rng.randint(1, 2 * n_opp)
        v = start
        for _ in range(k):
            v = v.move(rng.choice(v.candidates()))
        while v.strategy is None:
            v = v.move(rng.choice(v.candidates()))
        if tabu is None:
            return v
        if v.key not in tabu:
            tabu.add(v.key)
            return v
    raise TabuExhausted(f"no unvisited initial vertex after {retries} walks")


# -- search ---------------------------------------------------------------------------


@dataclass
class LSVConfig:
    heuristic: str = "FIR"
    cutoff: int | None = None  # None means 2 m^2
    max_n: int | None = None  # None means max(1, m^2 // 2)
    seed: int = 0
    deadline: float | None = None
    max_restarts: int | None = None
    tabu: set = field(default_factory=set)

    def __post_init__(self):
        if self.heuristic not in ("BI", "FI", "FIR"):
            raise ValueError(f"unknown heuristic {self.heuristic!r}")
        if self.cutoff is not None and self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        if self.max_n is not None and self.max_n < 1:
            raise ValueError("max_n must be >= 1")


def ls_v(g: BimatrixGame, cfg: LSVConfig | None = None) -> SolveReport:
    """Descend on f over best-response vertices with restarts.

    Stops at f = 0 (exact equilibrium), at the deadline, after
    ``max_restarts`` restarts, or when the tabu list runs dry.
    """
    cfg = cfg or LSVConfig()
    agent = searched_agent(g)
    m = max(g.m1, g.m2)
    cutoff = cfg.cutoff or 2 * m * m
    max_n = cfg.max_n or max(1, m * m // 2)
    rng = random.Random(cfg.seed)
    deadline = Deadline(cfg.deadline)
    tracker = BestTracker(g)
    tabu = None if cfg.heuristic == "FIR" else cfg.tabu
    cache: dict[tuple, FEval] = {}
    lp_solves = restarts = moves = 0
    trajectory: list[Fraction] = []
    descents: list[list[Fraction]] = []

    def f(v: VertexSolution) -> FEval | None:
        nonlocal lp_solves
        x = v.strategy
        if x is None:
            return None
        if x not in cache:
            lp_solves += 1
            cache[x] = eval_f(g, agent, x)
            tracker.offer(_profile(agent, x, cache[x].witness))
        return cache[x]

    def report(timed_out: bool = False) -> SolveReport:
        info = {"agent": agent, "lp_solves": lp_solves, "moves": moves,
                "best_history": tracker.history, "descents": descents}
        return SolveReport.build("lsv", g, tracker.fallback(), timed_out=timed_out,
                                 steps=moves, restarts=restarts, info=info)

    while True:
        if deadline.expired():
            return report(True)
        if cfg.max_restarts is not None and restarts > cfg.max_restarts:
            return report()
        try:
            cur = random_initial(g, agent, rng, tabu)
        except TabuExhausted:
            return report()
        fc = f(cur)
        trajectory = [fc.value]
        descents.append(trajectory)
        length = 0
        while fc.value > 0:
            if length >= cutoff or deadline.expired():
                break
            nxt = _choose(cur, fc, cfg.heuristic, rng, max_n, f, deadline)
            if nxt is None:
                break
            cur, fc = nxt
            trajectory.append(fc.value)
            length += 1
            moves += 1
        if fc.value == 0:
            return report()
        restarts += 1


def _choose(cur, fc, heuristic, rng, max_n, f, deadline):
    best = None
    for nb in neighbors(cur, heuristic, rng, max_n):
        fe = f(nb)
        if fe is None or fe.value >= fc.value:
            if deadline.expired():
                break
            continue
        if heuristic != "BI":
            return nb, fe
        if best is None or fe.value < best[1].value:
            best = (nb, fe)
    return best


def _profile(agent: int, x, y) -> StrategyProfile:
    return StrategyProfile(x, y) if agent == 1 else StrategyProfile(y, x)
