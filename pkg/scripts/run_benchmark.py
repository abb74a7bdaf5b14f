#!/usr/bin/env python3
"""Run the desk-scale Monte-Carlo benchmark and print an AMSE table.

Runs the mixture rule against the universal-threshold baselines over the
standard test functions. Results land in an output directory as CSV and
JSON; a compact table goes to stdout.

Example:
    python scripts/run_benchmark.py --preset heavisine-desk --out results/
    python scripts/run_benchmark.py --functions doppler --sizes 2048 \
        --snrs 0.2 --replications 100 --out results/
"""

import argparse
import json
import sys
from pathlib import Path

from epashrink import (
    RuleSpec,
    StudyConfig,
    TestFunctionKind,
    benchmark_elicitation,
    run_study,
    study_preset,
)
from epashrink.cli import write_table_csv


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--preset", choices=["smoke", "heavisine-desk", "acceptance-desk"])
    ap.add_argument("--functions", nargs="+",
                    choices=[k.value for k in TestFunctionKind],
                    default=["heavisine"])
    ap.add_argument("--sizes", nargs="+", type=int, default=[512, 1024, 2048])
    ap.add_argument("--snrs", nargs="+", type=float, default=[0.2, 1.0, 3.0])
    ap.add_argument("--replications", type=int, default=100)
    ap.add_argument("--rules", nargs="+", default=["esr", "soft-universal"])
    ap.add_argument("--seed", type=int, default=20250810)
    ap.add_argument("--out", type=Path, default=Path("benchmark-results"))
    return ap.parse_args()


def main():
    args = parse_args()
    if args.preset:
        config = study_preset(args.preset, args.seed)
    else:
        config = StudyConfig(
            functions=tuple(TestFunctionKind(f) for f in args.functions),
            sizes=tuple(args.sizes),
            snrs=tuple(args.snrs),
            replications=args.replications,
            rules=tuple(RuleSpec.parse(r) for r in args.rules),
            elicitation=benchmark_elicitation(),
            seed=args.seed,
        )
    report = run_study(config)

    args.out.mkdir(parents=True, exist_ok=True)
    rows = [
        [c.function.value, c.n, float(c.snr), c.rule, float(c.amse),
         float(c.mse_sd), len(c.mse_samples), float(c.wall_time_s),
         int(c.degenerate_sd)]
        for c in report.cells
    ]
    write_table_csv(
        args.out / "report.csv",
        ["function", "n", "snr", "rule", "amse", "mse_sd", "replications",
         "wall_time_s", "degenerate_sd"],
        rows,
    )
    (args.out / "summary.json").write_text(
        json.dumps(report.to_dict(), indent=2) + "\n"
    )

    print(f"{'function':10s} {'n':>5s} {'snr':>5s} {'rule':16s} "
          f"{'amse':>9s} {'sd':>8s}")
    for cell in report.cells:
        print(f"{cell.function.value:10s} {cell.n:5d} {cell.snr:5g} "
              f"{cell.rule:16s} {cell.amse:9.3f} {cell.mse_sd:8.3f}")
    print(f"\nwrote {args.out / 'report.csv'} and {args.out / 'summary.json'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
