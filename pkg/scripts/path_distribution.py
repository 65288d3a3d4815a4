#!/usr/bin/env python3
"""LH path-length distribution per game over a generated corpus, as CSV.

One row per game with the box-plot summary and the kurtosis of its
m1 + m2 path lengths.
"""
import argparse
import csv
import sys

from pathnash.game import rat_str
from pathnash.generators import KINDS, GenSpec, generate
from pathnash.lh import enumerate_paths


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=KINDS, default="random")
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 6, 8, 10])
    ap.add_argument("--count", type=int, default=20, help="games per size")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["game", "m", "mean", "median", "q1", "q3", "min", "max", "kurtosis"])
    for m in args.sizes:
        for i in range(args.count):
            spec = GenSpec(args.kind, m, m, seed=args.seed + i)
            st = enumerate_paths(generate(spec))
            kurt = "undefined" if st.kurtosis is None else f"{float(st.kurtosis):.6g}"
            w.writerow([spec.label, m, f"{float(st.mean):.6g}", rat_str(st.median),
                        rat_str(st.q1), rat_str(st.q3), int(st.min), int(st.max), kurt])


if __name__ == "__main__":
    main()
