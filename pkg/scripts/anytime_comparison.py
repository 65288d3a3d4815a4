#!/usr/bin/env python3
"""Best epsilon reached by each solver under a range of wall-clock budgets.

Results depend on machine speed, unlike every other output of the package.
"""
import argparse
import csv
import sys

from pathnash.cli import decimal, run_solver
from pathnash.game import rat_str
from pathnash.generators import KINDS, GenSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=KINDS, default="covariant")
    ap.add_argument("--m", type=int, default=20)
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--algs", default="rrlh,rrl,lsv,iplh")
    ap.add_argument("--budgets-ms", type=int, nargs="+", default=[10, 100, 1000])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["game", "algorithm", "budget_ms", "outcome", "eps", "eps_decimal", "steps"])
    for i in range(args.count):
        spec = GenSpec(args.kind, args.m, args.m, seed=args.seed + i)
        g = generate(spec)
        for alg in args.algs.split(","):
            for ms in args.budgets_ms:
                rep = run_solver(g, alg, seed=args.seed, deadline_ms=ms)
                w.writerow([spec.label, alg, ms, rep.outcome, rat_str(rep.metrics.eps),
                            decimal(rep.metrics.eps), rep.steps])
                sys.stdout.flush()


if __name__ == "__main__":
    main()
