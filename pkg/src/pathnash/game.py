"""Bimatrix games, mixed strategies and the exact approximation metrics."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rat = Fraction
Matrix = tuple[tuple[Fraction, ...], ...]


class DimensionMismatch(ValueError):
    pass


def _matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(e) for e in row) for row in rows)


@dataclass(frozen=True)
class BimatrixGame:
    """Two-player game.  ``u2[j][k]`` is agent 2's payoff when agent 1
    plays ``j`` and agent 2 plays ``k`` (both matrices are m1 x m2)."""

    u1: Matrix
    u2: Matrix
    normalized: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "u1", _matrix(self.u1))
        object.__setattr__(self, "u2", _matrix(self.u2))
        m1 = len(self.u1)
        if m1 < 1 or len(self.u2) != m1:
            raise DimensionMismatch("payoff matrices need the same positive row count")
        m2 = len(self.u1[0])
        if m2 < 1 or any(len(r) != m2 for r in self.u1 + self.u2):
            raise DimensionMismatch("ragged payoff matrix")

    @property
    def m1(self) -> int:
        return len(self.u1)

    @property
    def m2(self) -> int:
        return len(self.u1[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.m1, self.m2

    def payoff(self, agent: int) -> Matrix:
        return self.u1 if agent == 1 else self.u2

    def same_payoffs(self, other: "BimatrixGame") -> bool:
        return self.u1 == other.u1 and self.u2 == other.u2


@dataclass(frozen=True)
class StrategyProfile:
    x1: tuple[Fraction, ...]
    x2: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "x1", tuple(Fraction(p) for p in self.x1))
        object.__setattr__(self, "x2", tuple(Fraction(p) for p in self.x2))

    def strategy(self, agent: int) -> tuple[Fraction, ...]:
        return self.x1 if agent == 1 else self.x2

    def is_valid(self) -> bool:
        return all(
            all(p >= 0 for p in x) and sum(x) == 1 for x in (self.x1, self.x2)
        )

    def supports(self) -> tuple[frozenset[int], frozenset[int]]:
        return support(self.x1), support(self.x2)

    def to_strings(self) -> dict[str, list[str]]:
        return {"x1": [rat_str(p) for p in self.x1], "x2": [rat_str(p) for p in self.x2]}


@dataclass(frozen=True)
class SolutionMetrics:
    eps: Fraction
    eps_ws: Fraction
    regret: Fraction
    values: tuple[Fraction, Fraction] = field(default=(Fraction(0), Fraction(0)))

    @property
    def exact(self) -> bool:
        return self.eps == 0


def rat_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def support(x: Sequence[Fraction]) -> frozenset[int]:
    return frozenset(i for i, p in enumerate(x) if p > 0)


def pure(n: int, k: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(i == k)) for i in range(n))


def uniform(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, n) for _ in range(n))


def normalize_strategy(xt: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale a nonzero nonnegative vector onto the simplex."""
    total = sum(xt, Fraction(0))
    if total <= 0:
        raise ValueError("cannot normalize the zero vector")
    return tuple(Fraction(p) / total for p in xt)


# -- transforms ---------------------------------------------------------------


def _affine(u: Matrix, a: Fraction, b: Fraction) -> Matrix:
    return tuple(tuple(a * e + b for e in row) for row in u)


def _normalize_matrix(u: Matrix) -> Matrix:
    lo = min(min(r) for r in u)
    hi = max(max(r) for r in u)
    if lo == hi:
        return tuple(tuple(Fraction(0) for _ in r) for r in u)
    return _affine(u, 1 / (hi - lo), -lo / (hi - lo))


def normalize(g: BimatrixGame) -> BimatrixGame:
    """Rescale each payoff matrix affinely onto [0, 1]; constant matrices become 0."""
    return BimatrixGame(_normalize_matrix(g.u1), _normalize_matrix(g.u2), True, g.name)


def positive_shift(g: BimatrixGame) -> BimatrixGame:
    """Translate each matrix whose minimum is <= 0 so that its minimum is 1."""
    out = []
    for u in (g.u1, g.u2):
        lo = min(min(r) for r in u)
        out.append(_affine(u, Fraction(1), 1 - lo) if lo <= 0 else u)
    return BimatrixGame(out[0], out[1], False, g.name)


def integer_payoffs(u: Matrix) -> tuple[int, list[list[int]]]:
    """Scale a rational matrix to integers; returns the factor and the matrix."""
    L = 1
    for row in u:
        for e in row:
            L = lcm(L, e.denominator)
    return L, [[int(e * L) for e in row] for row in u]


def transpose(u: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*u)]


# -- payoffs and metrics --------------------------------------------------------


def _check(g: BimatrixGame, p: StrategyProfile) -> None:
    if len(p.x1) != g.m1 or len(p.x2) != g.m2:
        raise DimensionMismatch(
            f"profile is {len(p.x1)}x{len(p.x2)} but the game is {g.m1}x{g.m2}"
        )


def action_payoffs(g: BimatrixGame, p: StrategyProfile, agent: int) -> list[Fraction]:
    """Expected payoff of each pure action of ``agent`` against the opponent."""
    if agent == 1:
        return [sum((e * q for e, q in zip(row, p.x2)), Fraction(0)) for row in g.u1]
    return [
        sum((g.u2[j][k] * p.x1[j] for j in range(g.m1)), Fraction(0)) for k in range(g.m2)
    ]


def best_responses(g: BimatrixGame, p: StrategyProfile, agent: int) -> frozenset[int]:
    pay = action_payoffs(g, p, agent)
    top = max(pay)
    return frozenset(k for k, v in enumerate(pay) if v == top)


def metrics(g: BimatrixGame, p: StrategyProfile) -> SolutionMetrics:
    _check(g, p)
    eps = eps_ws = reg = Fraction(0)
    values = []
    for agent in (1, 2):
        x = p.strategy(agent)
        pay = action_payoffs(g, p, agent)
        top = max(pay)
        achieved = sum((q * v for q, v in zip(x, pay)), Fraction(0))
        values.append(achieved)
        eps = max(eps, top - achieved)
        for k in support(x):
            loss = top - pay[k]
            eps_ws = max(eps_ws, loss)
            reg += loss
    return SolutionMetrics(eps, eps_ws, reg, (values[0], values[1]))


def epsilon(g: BimatrixGame, p: StrategyProfile) -> Fraction:
    return metrics(g, p).eps


def epsilon_ws(g: BimatrixGame, p: StrategyProfile) -> Fraction:
    return metrics(g, p).eps_ws


def regret(g: BimatrixGame, p: StrategyProfile) -> Fraction:
    return metrics(g, p).regret


def verify_ne(g: BimatrixGame, p: StrategyProfile) -> bool:
    """Exact Nash check; invalid profiles are never equilibria."""
    if not p.is_valid():
        return False
    try:
        return metrics(g, p).eps == 0
    except DimensionMismatch:
        return False


# -- float mode -------------------------------------------------------------------


def metrics_float(g: BimatrixGame, x1: Sequence[float], x2: Sequence[float]) -> dict[str, float]:
    """Floating-point metrics for float-mode reports.  Never used to verify."""
    import numpy as np

    U1 = np.array(g.u1, dtype=float)
    U2 = np.array(g.u2, dtype=float)
    a, b = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    p1, p2 = U1 @ b, U2.T @ a
    eps = max(p1.max() - a @ p1, p2.max() - b @ p2)
    ws = [p1.max() - p1[a > 0], p2.max() - p2[b > 0]]
    return {
        "eps": float(eps),
        "eps_ws": float(max(w.max(initial=0.0) for w in ws)),
        "regret": float(sum(w.sum() for w in ws)),
    }
