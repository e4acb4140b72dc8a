"""Accuracy of the forced direction decision against sample size, as plot-ready TSV.

    python scripts/accuracy_vs_n.py --out results/accuracy_general.tsv
    python scripts/accuracy_vs_n.py --cyclic --out results/accuracy_cyclic.tsv
"""
import argparse
import sys
from pathlib import Path

from ucm.bench import run_synthetic_experiment

GENERAL_GRID = [(2, 2), (3, 3), (5, 5), (2, 5), (5, 2)]
CYCLIC_GRID = [(3, 3), (5, 5), (2, 5), (5, 3)]
NS = [25, 50, 100, 200, 500, 1000, 2000, 5000]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cyclic", action="store_true")
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", type=Path)
    args = parser.parse_args(argv)

    grid = CYCLIC_GRID if args.cyclic else GENERAL_GRID
    kind = "cyclic" if args.cyclic else "general"
    report = run_synthetic_experiment(grid, NS, args.trials, kind, args.seed)
    sys.stdout.write(report.to_text())
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(report.to_tsv())
        args.out.with_suffix(".json").write_text(report.to_json())


if __name__ == "__main__":
    main()
