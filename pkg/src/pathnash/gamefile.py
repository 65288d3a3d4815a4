"""Game and profile file formats.

JSON::

    {"m1": 2, "m2": 2, "u1": ["1/1", "0/1", "0/1", "1/1"], "u2": [...],
     "name": "...", "seed": 0}

``u1``/``u2`` are row-major (nested rows are accepted on input).  Payoffs are
``"num/den"`` strings or decimal literals and are parsed exactly.

Plain text: a first line ``m1 m2``, then m1 lines of m2 payoffs for U1, a
blank line, and m1 lines for U2.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .game import BimatrixGame, StrategyProfile, rat_str


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, path: str = ""):
        self.line, self.col, self.path = line, col, path
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{col}: {msg}")


def parse_rat(tok: Any) -> Fraction:
    if isinstance(tok, bool) or not isinstance(tok, (str, int)):
        raise ValueError(f"payoff must be a string or integer, got {tok!r}")
    return Fraction(tok.strip()) if isinstance(tok, str) else Fraction(tok)


def _locate(text: str, needle: str) -> tuple[int, int]:
    pos = text.find(needle)
    if pos < 0:
        return 0, 0
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def game_to_json(g: BimatrixGame, **meta) -> dict:
    doc = {
        "m1": g.m1,
        "m2": g.m2,
        "u1": [rat_str(e) for row in g.u1 for e in row],
        "u2": [rat_str(e) for row in g.u2 for e in row],
    }
    if g.name:
        doc["name"] = g.name
    doc.update({k: v for k, v in meta.items() if v is not None})
    return doc


def dumps_game(g: BimatrixGame, fmt: str = "json", **meta) -> str:
    if fmt == "json":
        return json.dumps(game_to_json(g, **meta), indent=1) + "\n"
    if fmt == "text":
        lines = [f"{g.m1} {g.m2}"]
        lines += [" ".join(rat_str(e) for e in row) for row in g.u1]
        lines.append("")
        lines += [" ".join(rat_str(e) for e in row) for row in g.u2]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def save_game(g: BimatrixGame, path, fmt: str | None = None, **meta) -> str:
    """Write ``g``; returns the sha256 of the written bytes."""
    path = Path(path)
    fmt = fmt or ("text" if path.suffix in (".txt", ".game") else "json")
    data = dumps_game(g, fmt, **meta).encode()
    path.write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def _from_json(text: str, path: str) -> BimatrixGame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, path) from None
    try:
        m1, m2 = int(doc["m1"]), int(doc["m2"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("m1 and m2 must be integers", 1, 1, path) from None
    mats = []
    for key in ("u1", "u2"):
        raw = doc.get(key)
        if not isinstance(raw, list):
            raise ParseError(f"{key} must be an array", *_locate(text, f'"{key}"'), path)
        flat = [e for row in raw for e in row] if raw and isinstance(raw[0], list) else raw
        if len(flat) != m1 * m2:
            raise ParseError(f"{key} has {len(flat)} entries, expected {m1 * m2}",
                             *_locate(text, f'"{key}"'), path)
        vals = []
        for tok in flat:
            try:
                vals.append(parse_rat(tok))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad payoff {tok!r}: {exc}", *_locate(text, json.dumps(tok)),
                                 path) from None
        mats.append([vals[r * m2:(r + 1) * m2] for r in range(m1)])
    return BimatrixGame(mats[0], mats[1], name=str(doc.get("name", "")))


def _from_text(text: str, path: str) -> BimatrixGame:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1, 1, path)
    head = lines[0].split()
    try:
        m1, m2 = int(head[0]), int(head[1])
        if len(head) != 2 or m1 < 1 or m2 < 1:
            raise ValueError
    except (ValueError, IndexError):
        raise ParseError("first line must be 'm1 m2'", 1, 1, path) from None
    rows: list[list[Fraction]] = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        pos = 0
        vals = []
        for tok in line.split():
            pos = line.index(tok, pos)
            try:
                vals.append(parse_rat(tok))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad payoff {tok!r}", ln, pos + 1, path) from None
            pos += len(tok)
        if len(vals) != m2:
            raise ParseError(f"expected {m2} payoffs, found {len(vals)}", ln, 1, path)
        rows.append(vals)
    if len(rows) != 2 * m1:
        raise ParseError(f"expected {2 * m1} payoff rows, found {len(rows)}", len(lines), 1, path)
    return BimatrixGame(rows[:m1], rows[m1:])


def loads_game(text: str, path: str = "") -> BimatrixGame:
    if text.lstrip().startswith("{"):
        return _from_json(text, path)
    return _from_text(text, path)


def load_game(path) -> BimatrixGame:
    path = Path(path)
    return loads_game(path.read_text(), str(path))


def loads_profile(text: str, path: str = "") -> StrategyProfile:
    """Profile JSON ``{"x1": [...], "x2": [...]}`` or a solve report holding one."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, path) from None
    if isinstance(doc, dict) and "profile" in doc:
        doc = doc["profile"]
    try:
        return StrategyProfile([parse_rat(q) for q in doc["x1"]], [parse_rat(q) for q in doc["x2"]])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad profile: {exc}", 1, 1, path) from None


def dumps_profile(p: StrategyProfile) -> str:
    return json.dumps(p.to_strings()) + "\n"
