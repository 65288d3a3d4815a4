#!/usr/bin/env python3
"""Median rrLH pivot count against game size, with a log-log slope.

Only games whose smallest equilibrium support is at most --max-support are
kept, mirroring the filter used by the acceptance suite.
"""
import argparse
import math
import statistics

from pathnash.generators import GenSpec, generate
from pathnash.lh import RestartConfig, rr_lh
from pathnash.oracle import smallest_support_size


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 15, 20])
    ap.add_argument("--games", type=int, default=12)
    ap.add_argument("--runs", type=int, default=3, help="rrLH seeds per game")
    ap.add_argument("--max-support", type=int, default=2)
    ap.add_argument("--cutoff0", type=int, default=20)
    args = ap.parse_args()

    medians = {}
    print("m,kept,scanned,median_pivots")
    for m in args.sizes:
        pivots, seed, kept = [], 0, 0
        while kept < args.games:
            g = generate(GenSpec("random", m, m, seed=1000 * m + seed))
            seed += 1
            if smallest_support_size(g, args.max_support) is None:
                continue
            kept += 1
            pivots += [rr_lh(g, RestartConfig(args.cutoff0, s)).steps for s in range(args.runs)]
        medians[m] = statistics.median(pivots)
        print(f"{m},{kept},{seed},{medians[m]}", flush=True)
    fit = statistics.linear_regression([math.log(m) for m in medians],
                                       [math.log(v) for v in medians.values()])
    print(f"# log-log exponent {fit.slope:.3f}")


if __name__ == "__main__":
    main()
