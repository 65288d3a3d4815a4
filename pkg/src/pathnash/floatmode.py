"""Floating-point Lemke-Howson, for comparison runs only.

Ties in the ratio test go to the lowest row, so degenerate games may cycle;
``max_steps`` bounds the path.  Results are never treated as verified.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import BimatrixGame, metrics_float, positive_shift

TOL = 1e-12


@dataclass
class FloatLHResult:
    label: int
    outcome: str  # "equilibrium", "cutoff" or "ray"
    steps: int
    x1: list[float]
    x2: list[float]
    metrics: dict[str, float]


def _side(var: tuple[str, int], m1: int) -> int:
    kind, lab = var
    return 0 if (kind == "x") == (lab <= m1) else 1


def lh_float(g: BimatrixGame, label: int, max_steps: int = 10_000) -> FloatLHResult:
    m1, m2 = g.shape
    if not 1 <= label <= m1 + m2:
        raise ValueError(f"label must be in 1..{m1 + m2}")
    gs = positive_shift(g)
    U1 = np.array(gs.u1, dtype=float)
    U2 = np.array(gs.u2, dtype=float)
    labels1 = range(1, m1 + 1)
    labels2 = range(m1 + 1, m1 + m2 + 1)
    tabs = [
        np.hstack([U2.T, np.eye(m2), np.ones((m2, 1))]),
        np.hstack([U1, np.eye(m1), np.ones((m1, 1))]),
    ]
    cols = [
        [("x", l) for l in labels1] + [("s", l) for l in labels2],
        [("x", l) for l in labels2] + [("s", l) for l in labels1],
    ]
    bases = [[("s", l) for l in labels2], [("s", l) for l in labels1]]

    entering = ("x", label)
    outcome, steps = "cutoff", 0
    while steps < max_steps:
        side = _side(entering, m1)
        T, basis = tabs[side], bases[side]
        c = cols[side].index(entering)
        col = T[:, c]
        rows = np.flatnonzero(col > TOL)
        if rows.size == 0:
            outcome = "ray"
            break
        r = rows[np.argmin(T[rows, -1] / col[rows])]
        T[r] /= T[r, c]
        for i in range(T.shape[0]):
            if i != r:
                T[i] -= T[i, c] * T[r]
        leaving, basis[r] = basis[r], entering
        steps += 1
        if leaving[1] == label:
            outcome = "equilibrium"
            break
        entering = ("s" if leaving[0] == "x" else "x", leaving[1])

    def strategy(side: int, labs: range) -> list[float]:
        v = np.zeros(len(labs))
        for row, (kind, lab) in enumerate(bases[side]):
            if kind == "x":
                v[lab - labs.start] = tabs[side][row, -1]
        total = v.sum()
        return (v / total).tolist() if total > 0 else [1.0 / len(labs)] * len(labs)

    x1, x2 = strategy(0, labels1), strategy(1, labels2)
    return FloatLHResult(label, outcome, steps, x1, x2, metrics_float(g, x1, x2))
