"""Command-line front end.

Exit codes: 0 exact equilibrium, 2 approximate/timeout/not an equilibrium,
1 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .game import BimatrixGame, StrategyProfile, metrics, rat_str
from .gamefile import (
    ParseError,
    dumps_game,
    game_to_json,
    load_game,
    loads_game,
    loads_profile,
    save_game,
)
from .generators import KINDS, GenSpec, InvalidSpec, generate
from .lemke import RRLConfig, dyadic_simplex_point, lemke_solve, rr_l
from .lh import RestartConfig, all_paths, lh_solve, rr_lh, PathStats
from .lsv import LSVConfig, ls_v
from .oracle import enumerate_equilibria
from .perturb import ip_lh
from .report import BestTracker, Deadline, SolveReport

ALGS = ("lh", "rrlh", "lemke", "rrl", "lsv", "iplh")
EXIT_EXACT, EXIT_ERROR, EXIT_APPROX = 0, 1, 2
BENCH_DEADLINE_MS = 600_000
DECIMAL_DIGITS = 12
# info entries too bulky or too run-specific for a report
_DROP_INFO = {"best_history", "descents"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def decimal(q: Fraction) -> str:
    return f"{float(q):.{DECIMAL_DIGITS}g}"


def _jsonable(v):
    if isinstance(v, Fraction):
        return rat_str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(e) for e in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(e) for k, e in v.items()}
    return v


def metrics_json(m) -> dict:
    return {
        "eps": rat_str(m.eps),
        "eps_ws": rat_str(m.eps_ws),
        "regret": rat_str(m.regret),
        "decimal": {k: decimal(getattr(m, a)) for k, a in
                    (("eps", "eps"), ("eps_ws", "eps_ws"), ("regret", "regret"))},
        "decimal_note": "non-authoritative 12-digit renderings",
    }


def report_json(rep: SolveReport, seed: int, config: dict, wall_ms: float | None) -> dict:
    return {
        "algorithm": rep.algorithm,
        "seed": seed,
        "config": config,
        "outcome": rep.outcome,
        "verified": True,
        "profile": rep.profile.to_strings(),
        "metrics": metrics_json(rep.metrics),
        "steps": rep.steps,
        "restarts": rep.restarts,
        "info": {k: _jsonable(v) for k, v in rep.info.items() if k not in _DROP_INFO},
        "wall_ms": wall_ms,
    }


# -- solving ----------------------------------------------------------------------


def run_solver(g: BimatrixGame, alg: str, *, seed: int = 0, label: int | None = None,
               cutoff0: int = 20, deadline_ms: int | None = None, heuristic: str = "FIR",
               max_restarts: int | None = None, max_iter: int = 12) -> SolveReport:
    seconds = None if deadline_ms is None else deadline_ms / 1000
    if label is not None and not 1 <= label <= g.m1 + g.m2:
        raise UsageError(f"--label must be in 1..{g.m1 + g.m2}")
    if alg == "lh":
        tracker = BestTracker(g)
        rec = lh_solve(g, label or 1, deadline=Deadline(seconds), tracker=tracker)
        prof = rec.profile if rec.outcome == "equilibrium" else tracker.fallback()
        return SolveReport.build("lh", g, prof, timed_out=rec.outcome == "timeout",
                                 steps=rec.steps, info={"label": label or 1})
    if alg == "rrlh":
        return rr_lh(g, RestartConfig(cutoff0, seed, seconds))
    if alg == "lemke":
        rng = random.Random(seed)
        x1, x2 = dyadic_simplex_point(rng, g.m1), dyadic_simplex_point(rng, g.m2)
        tracker = BestTracker(g)
        res = lemke_solve(g, x1, x2, deadline=Deadline(seconds), tracker=tracker)
        prof = res.profile if res.outcome == "equilibrium" else tracker.fallback()
        return SolveReport.build("lemke", g, prof, timed_out=res.outcome == "timeout",
                                 steps=res.steps, info={"path_outcome": res.outcome})
    if alg == "rrl":
        return rr_l(g, RRLConfig(seed=seed, deadline=seconds))
    if alg == "lsv":
        return ls_v(g, LSVConfig(heuristic=heuristic, seed=seed, deadline=seconds,
                                 max_restarts=max_restarts))
    if alg == "iplh":
        rep, _ = ip_lh(g, seconds, seed, max_iter=None if seconds else max_iter, label=label)
        return rep
    raise UsageError(f"unknown algorithm {alg!r}")


def _solver_kwargs(args) -> dict:
    return {
        "seed": args.seed, "label": args.label, "cutoff0": args.cutoff0,
        "deadline_ms": args.deadline_ms, "heuristic": args.heuristic,
        "max_restarts": args.max_restarts, "max_iter": args.max_iter,
    }


def _dump(doc: dict, out) -> None:
    out.write(json.dumps(doc, indent=1, sort_keys=False) + "\n")


def cmd_solve(args, out) -> int:
    g = load_game(args.game)
    if args.precision == "float":
        return _solve_float(g, args, out)
    kw = _solver_kwargs(args)
    t0 = time.perf_counter()
    rep = run_solver(g, args.alg, **kw)
    wall = round((time.perf_counter() - t0) * 1000, 3) if args.timing else None
    config = {"alg": args.alg, "precision": "exact", **kw}
    _dump(report_json(rep, args.seed, config, wall), out)
    return EXIT_EXACT if rep.exact else EXIT_APPROX


def _solve_float(g, args, out) -> int:
    from .floatmode import lh_float

    if args.alg != "lh":
        raise UsageError("--precision float is available for --alg lh only")
    t0 = time.perf_counter()
    res = lh_float(g, args.label or 1)
    wall = round((time.perf_counter() - t0) * 1000, 3) if args.timing else None
    doc = {
        "algorithm": "lh",
        "seed": args.seed,
        "config": {"alg": "lh", "precision": "float", "label": args.label or 1},
        "outcome": "approx",
        "verified": False,
        "path_outcome": res.outcome,
        "profile": {"x1": [repr(v) for v in res.x1], "x2": [repr(v) for v in res.x2]},
        "metrics": {k: decimal(Fraction(v)) for k, v in res.metrics.items()},
        "steps": res.steps,
        "restarts": 0,
        "wall_ms": wall,
    }
    _dump(doc, out)
    return EXIT_APPROX


# -- paths --------------------------------------------------------------------------

PATH_FIELDS = ["row", "label", "steps", "mean", "median", "q1", "q3", "min", "max", "kurtosis"]


def paths_rows(g: BimatrixGame) -> list[dict]:
    recs = all_paths(g)
    stats = PathStats.from_lengths([r.steps for r in recs])
    rows = [{"row": "path", "label": r.initial_label, "steps": r.steps} for r in recs]
    rows.append({
        "row": "summary",
        **{k: rat_str(getattr(stats, k)) for k in ("mean", "median", "q1", "q3", "min", "max")},
        "kurtosis": "undefined" if stats.kurtosis is None else rat_str(stats.kurtosis),
    })
    return rows


def cmd_paths(args, out) -> int:
    rows = paths_rows(load_game(args.game))
    if args.format == "json":
        _dump({"paths": rows[:-1], "summary": rows[-1]}, out)
    else:
        w = csv.DictWriter(out, PATH_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return EXIT_EXACT


# -- bench ---------------------------------------------------------------------------

BENCH_FIELDS = ["instance", "algorithm", "trial", "seed", "outcome", "eps", "eps_ws",
                "regret", "eps_decimal", "steps", "restarts", "wall_ms", "error"]


def parse_gen(text: str) -> tuple[str, int, int, float | None]:
    """``kind:m1xm2`` or ``kind:m1xm2:rho``."""
    parts = text.split(":")
    try:
        kind, dims = parts[0], parts[1]
        m1, m2 = (int(v) for v in dims.lower().split("x"))
        rho = float(parts[2]) if len(parts) > 2 else None
        if len(parts) > 3:
            raise ValueError
    except (IndexError, ValueError):
        raise UsageError(f"bad --gen {text!r}; expected kind:m1xm2[:rho]") from None
    return kind, m1, m2, rho


def trial_seed(seed: int, instance: str, alg: str, trial: int) -> int:
    return random.Random(f"{seed}:{instance}:{alg}:{trial}").getrandbits(32)


def _bench_task(task) -> dict:
    name, game_doc, alg, trial, seed, kw, timing = task
    row = {"instance": name, "algorithm": alg, "trial": trial, "seed": seed}
    try:
        g = loads_game(json.dumps(game_doc))
        t0 = time.perf_counter()
        rep = run_solver(g, alg, seed=seed, **kw)
        wall = round((time.perf_counter() - t0) * 1000, 3) if timing else ""
        row.update(outcome=rep.outcome, eps=rat_str(rep.metrics.eps),
                   eps_ws=rat_str(rep.metrics.eps_ws), regret=rat_str(rep.metrics.regret),
                   eps_decimal=decimal(rep.metrics.eps), steps=rep.steps,
                   restarts=rep.restarts, wall_ms=wall, error="")
    except Exception as exc:  # recorded per row; the run continues
        row.update(outcome="error", error=f"{type(exc).__name__}: {exc}")
    return row


def bench_instances(args) -> list[tuple[str, BimatrixGame]]:
    if bool(args.gen) == bool(args.dir):
        raise UsageError("bench needs exactly one of --gen or --dir")
    if args.gen:
        kind, m1, m2, rho = parse_gen(args.gen)
        specs = [GenSpec(kind, m1, m2, rho, args.seed + i) for i in range(args.count)]
        return [(s.label, generate(s)) for s in specs]
    files = sorted(p for p in Path(args.dir).iterdir()
                   if p.suffix in (".json", ".txt", ".game"))
    return [(p.name, load_game(p)) for p in files]


def run_bench(args) -> tuple[list[dict], dict[str, float]]:
    algs = [a.strip() for a in args.algs.split(",") if a.strip()]
    bad = [a for a in algs if a not in ALGS]
    if bad or not algs:
        raise UsageError(f"unknown algorithm(s) {bad}; choose from {ALGS}")
    kw = {"label": args.label, "cutoff0": args.cutoff0, "deadline_ms": args.deadline_ms,
          "heuristic": args.heuristic, "max_restarts": args.max_restarts,
          "max_iter": args.max_iter}
    tasks = [
        (name, game_to_json(g), alg, t, trial_seed(args.seed, name, alg, t), kw, args.timing)
        for name, g in bench_instances(args)
        for alg in algs
        for t in range(args.trials)
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_bench_task, tasks))
    else:
        rows = [_bench_task(t) for t in tasks]
    summary = {}
    for alg in algs:
        mine = [r for r in rows if r["algorithm"] == alg]
        summary[alg] = 100 * sum(r["outcome"] == "exact" for r in mine) / max(1, len(mine))
    return rows, summary


def cmd_bench(args, out) -> int:
    rows, summary = run_bench(args)
    buf = io.StringIO()
    w = csv.DictWriter(buf, BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        out.write(buf.getvalue())
    for alg, pct in summary.items():
        print(f"{alg}: {pct:.1f}% exact", file=sys.stderr)
    return EXIT_EXACT


# -- gen / verify / oracle ------------------------------------------------------------


def cmd_gen(args, out) -> int:
    spec = GenSpec(args.kind, args.m1, args.m2 or args.m1, args.rho, args.seed)
    g = generate(spec)
    meta = {"seed": spec.seed, "kind": spec.kind}
    if args.out:
        digest = save_game(g, args.out, args.format, **({} if args.format == "text" else meta))
        out.write(f"{digest}  {args.out}\n")
    else:
        import hashlib

        data = dumps_game(g, args.format or "json",
                          **({} if args.format == "text" else meta))
        out.write(data)
        print(hashlib.sha256(data.encode()).hexdigest(), file=sys.stderr)
    return EXIT_EXACT


def _read_profile(path: str) -> StrategyProfile:
    if path == "-":
        return loads_profile(sys.stdin.read(), "<stdin>")
    return loads_profile(Path(path).read_text(), path)


def cmd_verify(args, out) -> int:
    g = load_game(args.game)
    p = _read_profile(args.profile)
    if (len(p.x1), len(p.x2)) != g.shape:
        raise UsageError(f"profile shape {(len(p.x1), len(p.x2))} does not match game {g.shape}")
    valid = p.is_valid()
    m = metrics(g, p)
    ne = valid and m.eps == 0
    _dump({"valid_profile": valid, "equilibrium": ne, **metrics_json(m)}, out)
    return EXIT_EXACT if ne else EXIT_APPROX


def cmd_oracle(args, out) -> int:
    for p in enumerate_equilibria(load_game(args.game), args.max_support):
        out.write(json.dumps(p.to_strings()) + "\n")
    return EXIT_EXACT


# -- parser -----------------------------------------------------------------------------


def _add_solver_flags(p, *, deadline_default=None):
    p.add_argument("--label", type=int, help="LH label, 1-based (agent 1's actions first)")
    p.add_argument("--cutoff0", type=int, default=20, help="rrLH initial cutoff")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deadline-ms", type=int, default=deadline_default)
    p.add_argument("--heuristic", choices=("BI", "FI", "FIR"), default="FIR",
                   help="LS-v neighbour order")
    p.add_argument("--max-restarts", type=int, help="LS-v restart cap")
    p.add_argument("--max-iter", type=int, default=12,
                   help="ip-LH iteration cap when no deadline is set")
    p.add_argument("--timing", action="store_true",
                   help="record wall_ms (reports are then not byte-reproducible)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pathnash", description="Exact bimatrix Nash equilibrium solvers.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one game")
    p.add_argument("game")
    p.add_argument("--alg", choices=ALGS, default="rrlh")
    p.add_argument("--precision", choices=("exact", "float"), default="exact")
    _add_solver_flags(p)

    p = sub.add_parser("paths", help="LH path length per label plus summary")
    p.add_argument("game")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("bench", help="run solvers over a corpus, CSV out")
    p.add_argument("--gen", help="generated corpus kind:m1xm2[:rho]")
    p.add_argument("--count", type=int, default=10, help="instances for --gen")
    p.add_argument("--dir", help="directory of game files")
    p.add_argument("--algs", default="rrlh")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    _add_solver_flags(p, deadline_default=BENCH_DEADLINE_MS)

    p = sub.add_parser("gen", help="generate a game file")
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("--m1", type=int, default=3)
    p.add_argument("--m2", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--out")

    p = sub.add_parser("verify", help="check a profile; exit 0 iff exact equilibrium")
    p.add_argument("game")
    p.add_argument("profile", help="profile or report JSON; '-' reads stdin")

    p = sub.add_parser("oracle", help="list extreme equilibria, one JSON profile per line")
    p.add_argument("game")
    p.add_argument("--max-support", type=int)
    return ap


COMMANDS = {"solve": cmd_solve, "paths": cmd_paths, "bench": cmd_bench,
            "gen": cmd_gen, "verify": cmd_verify, "oracle": cmd_oracle}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args, out)
    except (UsageError, ParseError, InvalidSpec, OSError) as exc:
        print(f"pathnash {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
