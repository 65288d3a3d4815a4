"""Seeded desk-scale game generators.

All payoffs are drawn on the dyadic grid 2**-16 and the game is normalized
afterwards, so instances are exact and identical for identical specs.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .game import BimatrixGame, normalize
from .gamefile import load_game

KINDS = ("random", "covariant", "dominant", "degenerate", "coordination")
GRID = 1 << 16


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    kind: str = "random"
    m1: int = 3
    m2: int = 3
    rho: float | None = None  # covariant only; None draws rho uniformly from [-1, 1]
    seed: int = 0

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.m1 < 1 or self.m2 < 1:
            raise InvalidSpec("sizes must be >= 1")
        if self.rho is not None and not -1 <= self.rho <= 1:
            raise InvalidSpec("rho must lie in [-1, 1]")

    @property
    def label(self) -> str:
        rho = "" if self.rho is None else f"-rho{self.rho:g}"
        return f"{self.kind}-{self.m1}x{self.m2}{rho}-s{self.seed}"


def _uniform_matrix(rng: random.Random, m1: int, m2: int) -> list[list[Fraction]]:
    return [[Fraction(rng.randint(0, GRID), GRID) for _ in range(m2)] for _ in range(m1)]


def _quantize(z: float) -> Fraction:
    return Fraction(round(z * GRID), GRID)


def gaussian_pairs(rng: random.Random, rho: float, n: int) -> list[tuple[float, float]]:
    """n pairs of standard normals with correlation rho, via Box-Muller."""
    out = []
    c = math.sqrt(max(0.0, 1 - rho * rho))
    for _ in range(n):
        u1 = 1.0 - rng.random()  # (0, 1]
        u2 = rng.random()
        r = math.sqrt(-2.0 * math.log(u1))
        n1, n2 = r * math.cos(2 * math.pi * u2), r * math.sin(2 * math.pi * u2)
        out.append((n1, rho * n1 + c * n2))
    return out


def generate(spec: GenSpec) -> BimatrixGame:
    spec.validate()
    rng = random.Random(f"{spec.kind}:{spec.m1}x{spec.m2}:{spec.seed}")
    m1, m2 = spec.m1, spec.m2
    if spec.kind == "random":
        u1, u2 = _uniform_matrix(rng, m1, m2), _uniform_matrix(rng, m1, m2)
    elif spec.kind == "covariant":
        rho = spec.rho if spec.rho is not None else rng.uniform(-1.0, 1.0)
        pairs = gaussian_pairs(rng, rho, m1 * m2)
        u1 = [[_quantize(pairs[j * m2 + k][0]) for k in range(m2)] for j in range(m1)]
        u2 = [[_quantize(pairs[j * m2 + k][1]) for k in range(m2)] for j in range(m1)]
    elif spec.kind == "dominant":
        u1, u2 = _uniform_matrix(rng, m1, m2), _uniform_matrix(rng, m1, m2)
        d1, d2 = rng.randrange(m1), rng.randrange(m2)
        for k in range(m2):
            u1[d1][k] = 1 + Fraction(rng.randint(1, GRID), GRID)
        for j in range(m1):
            u2[j][d2] = 1 + Fraction(rng.randint(1, GRID), GRID)
    elif spec.kind == "degenerate":
        # coarse payoffs plus duplicated actions force ratio-test ties
        u1 = [[Fraction(rng.randint(0, 4), 4) for _ in range(m2)] for _ in range(m1)]
        u2 = [[Fraction(rng.randint(0, 4), 4) for _ in range(m2)] for _ in range(m1)]
        if m1 >= 2:
            a, a2 = rng.sample(range(m1), 2)
            u1[a2], u2[a2] = list(u1[a]), list(u2[a])
        if m2 >= 2:
            b, b2 = rng.sample(range(m2), 2)
            for j in range(m1):
                u1[j][b2], u2[j][b2] = u1[j][b], u2[j][b]
    else:
        u1 = [[Fraction(int(j == k)) for k in range(m2)] for j in range(m1)]
        u2 = [row[:] for row in u1]
    g = BimatrixGame(u1, u2, name=spec.label)
    return normalize(g)


def load_external(path) -> BimatrixGame:
    """Read a game file (JSON or plain text, see :mod:`pathnash.gamefile`)."""
    return load_game(path)


def corpus(kind: str, sizes, count: int, seed: int = 0, **kw) -> list[BimatrixGame]:
    """``count`` games cycling through ``sizes`` (ints or (m1, m2) pairs)."""
    sizes = [(s, s) if isinstance(s, int) else tuple(s) for s in sizes]
    return [
        generate(GenSpec(kind, *sizes[i % len(sizes)], seed=seed + i, **kw))
        for i in range(count)
    ]
