"""Brute-force equilibrium enumeration used as ground truth in tests.

For every support ``S`` of one agent and every equally sized set ``T`` of
opponent actions that must be best responses, the square system

    sum_{a in S} x_a = 1,   (payoff of b against x) = v  for b in T,
    x_a = 0 outside S

is solved by exact rational elimination.  Keeping the nonnegative solutions
whose best-response set contains ``T`` yields every extreme equilibrium
strategy of the agent; in a nondegenerate game ``T`` is exactly the opponent's
support, which is textbook support enumeration.  Pairs of such strategies that
best respond to each other are the equilibria.

Deliberately independent of :mod:`pathnash.kernel`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from .game import BimatrixGame, StrategyProfile


@dataclass(frozen=True)
class SupportPair:
    s1: frozenset[int]
    s2: frozenset[int]

    def __post_init__(self):
        if not self.s1 or not self.s2:
            raise ValueError("supports must be nonempty")


def solve_exact(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None when singular."""
    n = len(M)
    A = [list(row) + [r] for row, r in zip(M, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [e / p for e in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [e - f * pe for e, pe in zip(A[i], A[c])]
    return [A[i][n] for i in range(n)]


def solve_int(M: list[list[int]], rhs: list[int]) -> tuple[list[int], int] | None:
    """Fraction-free (Bareiss) solve of a square integer system.

    Returns ``(nums, det)`` with ``det > 0`` and solution ``nums[i] / det``,
    or None when singular.
    """
    n = len(M)
    A = [list(row) + [r] for row, r in zip(M, rhs)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return None
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
        pk = A[k][k]
        for i in range(k + 1, n):
            f = A[i][k]
            A[i] = [(pk * e - f * pe) // prev for e, pe in zip(A[i], A[k])]
        prev = pk
    det = A[n - 1][n - 1]
    # back substitution in integers: x_i = nums[i] / det
    nums = [0] * n
    for i in range(n - 1, -1, -1):
        acc = A[i][n] * det - sum(A[i][j] * nums[j] for j in range(i + 1, n))
        nums[i] = acc // A[i][i]
    if det < 0:
        det, nums = -det, [-v for v in nums]
    return nums, det


def _opponent_payoffs(g: BimatrixGame, agent: int) -> list[list[int]]:
    """Integer matrix P with P[b][a] proportional to the opponent's payoff for b
    when ``agent`` plays a.  A positive scale leaves best responses unchanged."""
    if agent == 1:  # agent 2 responds to x1: U2[a][b]
        rows = [[g.u2[a][b] for a in range(g.m1)] for b in range(g.m2)]
    else:  # agent 1 responds to x2: U1[a][b]
        rows = [list(row) for row in g.u1]
    L = lcm(*(e.denominator for row in rows for e in row))
    return [[int(e * L) for e in row] for row in rows]


def extreme_strategies(g: BimatrixGame, agent: int, max_support: int | None = None):
    """Yield (strategy, best-response set of the opponent) for each vertex strategy."""
    n = g.m1 if agent == 1 else g.m2
    P = _opponent_payoffs(g, agent)
    n_opp = len(P)
    top = min(n, n_opp) if max_support is None else min(n, n_opp, max_support)
    seen = set()
    for k in range(1, top + 1):
        for S in combinations(range(n), k):
            cols = [[P[b][a] for a in S] for b in range(n_opp)]
            for T in combinations(range(n_opp), k):
                # unknowns: x_a for a in S, then v
                M = [cols[b] + [-1] for b in T]
                M.append([1] * k + [0])
                sol = solve_int(M, [0] * k + [1])
                if sol is None:
                    continue
                nums, det = sol
                if any(q <= 0 for q in nums[:k]):
                    continue
                pay = [sum(c * q for c, q in zip(cols[b], nums)) for b in range(n_opp)]
                best = max(pay)
                if best != nums[k]:
                    continue
                x = [Fraction(0)] * n
                for a, q in zip(S, nums):
                    x[a] = Fraction(q, det)
                x = tuple(x)
                if x in seen:
                    continue
                seen.add(x)
                yield x, frozenset(b for b in range(n_opp) if pay[b] == best)


def enumerate_equilibria(g: BimatrixGame, max_support: int | None = None) -> list[StrategyProfile]:
    """All extreme Nash equilibria with supports of size <= ``max_support``.

    Ordered by total support size, then lexicographically by strategy.
    """
    xs = list(extreme_strategies(g, 1, max_support))
    ys = list(extreme_strategies(g, 2, max_support))
    found = []
    for x, br2 in xs:
        sx = frozenset(a for a, q in enumerate(x) if q)
        for y, br1 in ys:
            sy = frozenset(b for b, q in enumerate(y) if q)
            if sy <= br2 and sx <= br1:
                found.append(StrategyProfile(x, y))
    found.sort(key=lambda p: (_size(p), tuple(-q for q in p.x1), tuple(-q for q in p.x2)))
    return found


def _size(p: StrategyProfile) -> int:
    return sum(1 for q in p.x1 if q) + sum(1 for q in p.x2 if q)


def smallest_support_size(g: BimatrixGame, max_support: int | None = None) -> int | None:
    """min over equilibria of max(|S1|, |S2|); None if none within ``max_support``.

    Searches support bounds 1, 2, ... and stops at the first that admits an
    equilibrium.
    """
    top = min(g.m1, g.m2) if max_support is None else min(g.m1, g.m2, max_support)
    for k in range(1, top + 1):
        if enumerate_equilibria(g, k):
            return k
    return None


def support_pair(p: StrategyProfile) -> SupportPair:
    s1, s2 = p.supports()
    return SupportPair(s1, s2)
