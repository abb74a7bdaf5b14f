#!/usr/bin/env python3
"""Dump plot-ready tables for the shrinkage rule and its risk profile.

Produces the data behind the standard diagnostic pictures:
  rule-vs-alpha.csv     rule curves for several spike weights
  rule-vs-lambda.csv    rule curves for several variance-prior rates
  rule-vs-thresholds.csv  rule against hard/soft thresholding at eta=3.5
  risk-vs-alpha.csv     squared bias / variance / risk per spike weight
  risk-vs-lambda.csv    the same over variance-prior rates

Any CSV plotter (pandas, gnuplot, a spreadsheet) can draw them directly.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from epashrink import (
    MixturePriorParams,
    esr,
    hard_threshold,
    rule_statistics,
    soft_threshold,
)
from epashrink.cli import write_table_csv


def rule_family(path, beta, lam_values, alpha_values, d_lo, d_hi, points):
    grid = np.linspace(d_lo, d_hi, points)
    header = ["d"]
    cols = [grid]
    for alpha in alpha_values:
        for lam in lam_values:
            header.append(f"esr_a{alpha:g}_l{lam:g}")
            cols.append(esr(grid, MixturePriorParams(alpha, beta, lam)))
    write_table_csv(path, header,
                    ([float(c[i]) for c in cols] for i in range(points)))
    print(f"wrote {path}")


def rule_with_thresholds(path, beta, lam, alpha_values, eta, points):
    grid = np.linspace(-1.5 * beta, 1.5 * beta, points)
    header = ["d"] + [f"esr_a{a:g}" for a in alpha_values] + ["hard", "soft"]
    cols = [grid]
    cols += [esr(grid, MixturePriorParams(a, beta, lam)) for a in alpha_values]
    cols += [hard_threshold(grid, eta), soft_threshold(grid, eta)]
    write_table_csv(path, header,
                    ([float(c[i]) for c in cols] for i in range(points)))
    print(f"wrote {path}")


def risk_family(path, beta, combos, points):
    thetas = np.linspace(0.0, beta, points)
    rows = []
    for label, alpha, lam in combos:
        params = MixturePriorParams(alpha, beta, lam)
        for theta in thetas:
            stats = rule_statistics(float(theta), params)
            rows.append([label, float(theta), stats.bias_sq,
                         stats.variance, stats.risk])
    write_table_csv(path, ["curve", "theta", "bias_sq", "variance", "risk"], rows)
    print(f"wrote {path}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("curve-data"))
    ap.add_argument("--points", type=int, default=401)
    ap.add_argument("--risk-points", type=int, default=41)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    alphas = (0.6, 0.8, 0.95, 0.99)
    lams = (1.5, 3.0, 5.0, 7.0)
    rule_family(args.out / "rule-vs-alpha.csv", 6.0, (3.0,), alphas,
                -15.0, 15.0, args.points)
    rule_family(args.out / "rule-vs-lambda.csv", 6.0, lams, (0.95,),
                -15.0, 15.0, args.points)
    rule_with_thresholds(args.out / "rule-vs-thresholds.csv", 8.0, 1.0,
                         (0.65, 0.95, 0.99), 3.5, args.points)
    risk_family(args.out / "risk-vs-alpha.csv", 6.0,
                [(f"a{a:g}", a, 3.0) for a in alphas], args.risk_points)
    risk_family(args.out / "risk-vs-lambda.csv", 6.0,
                [(f"l{l:g}", 0.95, l) for l in lams], args.risk_points)
    return 0


if __name__ == "__main__":
    sys.exit(main())
