"""Canned comparison studies.

Six named studies exercise the whole package: ``exp1`` races five
solvers on the six-job week and rosters the winner; ``exp2`` checks the
duty-table generators; ``exp3`` re-solves under composed rule sets;
``exp4`` walks the urgent-task reserve arithmetic; ``exp5`` runs the
two-objective trade-off; ``tablegen_timing`` times table generation.

Run:  python3 demos/05_benchmark.py [--experiment exp1] [--seed N] [--trials N]
"""

import argparse
import json

from manpower import run_experiment
from manpower.bench import EXPERIMENT_IDS


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--experiment", choices=EXPERIMENT_IDS, default="exp1")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=3)
    args = ap.parse_args()

    report = run_experiment(args.experiment, seed=args.seed, trials=args.trials)

    if report.rows:
        print(f"{'solver':12s} {'best':>10s} {'median':>10s} {'feas':>5s} "
              f"{'accuracy':>9s} {'rank':>4s} {'ms':>8s} {'evals':>8s}")
        for r in report.rows:
            acc = f"{r.accuracy_pct}%" if r.accuracy_pct is not None else "-"
            print(f"{r.solver:12s} {r.best:10g} {r.median:10g} "
                  f"{r.feasible_rate:5.0%} {acc:>9s} {r.rank:4d} "
                  f"{r.median_millis:8.1f} {r.mean_evaluations:8.0f}")
        print()

    print("notes:")
    print(json.dumps(report.notes, indent=2, default=str))


if __name__ == "__main__":
    main()
