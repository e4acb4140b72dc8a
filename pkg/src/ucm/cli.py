"""Command-line entry point: ``ucm estimate|decide|simulate|benchmark``."""
from __future__ import annotations

import argparse
import json
import sys

from .core import Kind
from .errors import UcmError
from .estimation import EstimationConfig, estimate_arbitrary, estimate_cuc, estimate_uc
from .bench import (
    LoadOptions,
    load_manifest,
    load_pair,
    manifest_from_pairmeta,
    run_corpus,
    run_synthetic_experiment,
)
from .inference import DecisionConfig, decide


def _sizes(text):
    out = []
    for part in text.split(","):
        a, b = part.lower().split("x")
        out.append((int(a), int(b)))
    return out


def _ints(text):
    return [int(v) for v in text.split(",")]


def _add_load_args(p):
    p.add_argument("file")
    p.add_argument("--delimiter", choices=["tab", "comma", "whitespace"], default=None)
    p.add_argument("--missing", default="?", help="missing-value sentinel (default '?')")
    p.add_argument("--bin", type=int, default=None, metavar="K",
                   help="equal-frequency binning of numeric columns into K bins")


def _load(args):
    return load_pair(args.file, LoadOptions(args.delimiter, args.missing, args.bin))


def _emit(doc):
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_estimate(args):
    ds = _load(args)
    config = EstimationConfig(smoothing=args.smoothing, cuc_restarts=args.restarts,
                              rng_seed=args.seed)
    table = ds.table.pruned().smoothed(config.smoothing)
    doc = {"x_labels": list(ds.x_labels), "y_labels": list(ds.y_labels)}
    if args.kind == "arbitrary":
        channel, ll = estimate_arbitrary(table)
        doc |= {"kind": "arbitrary", "channel": channel.rows.tolist(), "log_likelihood": ll}
    else:
        est = estimate_uc(table) if args.kind == "uc" else estimate_cuc(table, config)
        doc |= est.to_dict()
    _emit(doc)


def cmd_decide(args):
    ds = _load(args)
    config = DecisionConfig(
        alpha=args.alpha, forced=args.forced, x_cyclic=args.x_cyclic, y_cyclic=args.y_cyclic,
        estimation=EstimationConfig(smoothing=args.smoothing, rng_seed=args.seed),
    )
    doc = decide(ds.table, config).to_dict()
    doc["pair"] = ds.name
    _emit(doc)


def cmd_simulate(args):
    kind = Kind.CYCLIC if args.cyclic else Kind.GENERAL
    report = run_synthetic_experiment(_sizes(args.sizes), _ints(args.ns), args.trials,
                                      kind, args.seed)
    sys.stdout.write(report.to_text())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_tsv())
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json())


def cmd_benchmark(args):
    entries = []
    if args.manifest:
        entries += load_manifest(args.manifest)
    if args.pairmeta:
        entries += manifest_from_pairmeta(args.pairmeta, args.data_dir)
    config = DecisionConfig(alpha=args.alpha, forced=args.forced,
                            estimation=EstimationConfig(rng_seed=args.seed))
    report = run_corpus(entries, config)
    sys.stdout.write(report.to_text())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json(include_timings=args.timings))
    if args.tsv:
        with open(args.tsv, "w") as fh:
            fh.write(report.to_tsv())


def build_parser():
    parser = argparse.ArgumentParser(prog="ucm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="fit a channel from X to Y")
    _add_load_args(p)
    p.add_argument("--kind", choices=["uc", "cuc", "arbitrary"], default="uc")
    p.add_argument("--smoothing", type=float, default=1e-3)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("decide", help="infer the causal direction of a pair")
    _add_load_args(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--forced", action="store_true")
    p.add_argument("--x-cyclic", action="store_true")
    p.add_argument("--y-cyclic", action="store_true")
    p.add_argument("--smoothing", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("simulate", help="direction accuracy on random models")
    p.add_argument("--sizes", required=True, help="e.g. 2x2,3x3")
    p.add_argument("--ns", required=True, help="e.g. 100,500,2000")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write TSV here")
    p.add_argument("--json", help="write JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("benchmark", help="evaluate a corpus of pairs")
    p.add_argument("--manifest")
    p.add_argument("--pairmeta", help="Tuebingen-style pairmeta.txt")
    p.add_argument("--data-dir", help="directory of pairXXXX.txt files for --pairmeta")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--forced", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write JSON here")
    p.add_argument("--tsv", help="write TSV here")
    p.add_argument("--timings", action="store_true", help="include runtimes in JSON")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "benchmark" and not (args.manifest or args.pairmeta):
        build_parser().error("benchmark needs --manifest or --pairmeta")
    try:
        args.func(args)
    except (UcmError, OSError) as exc:
        print(f"ucm: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
