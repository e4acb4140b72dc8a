"""Pair-file ingestion, experiment runners and report formatting.

Pair files hold one observation per line with two fields, separated by tabs,
commas or whitespace (auto-detected from the first non-blank line unless a
delimiter is given).  Records with an empty field or the missing-value
sentinel are dropped.  Labels are numbered in order of first appearance among
the kept records.

A corpus manifest is JSON, either a list of entries or ``{"pairs": [...]}``;
each entry has ``path`` (relative to the manifest), ``truth`` (``XtoY``,
``YtoX`` or ``unknown``) and optional ``name``, ``x_cyclic``, ``y_cyclic``,
``delimiter``, ``missing`` and ``bin``.
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .core import ContingencyTable, Kind
from .errors import (
    DegenerateTable,
    EmptyAfterFiltering,
    FewerThanTwoColumns,
    ParseError,
    UcmError,
)
from .estimation import EstimationConfig
from .inference import DecisionConfig, Verdict, decide
from .synthetic import RNG_ALGORITHM, random_ucm, sample
from .testing import independence_test

DELIMITERS = {"tab": "\t", "comma": ",", "whitespace": None}


class Truth(str, Enum):
    X_TO_Y = "XtoY"
    Y_TO_X = "YtoX"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, value) -> Truth:
        if value is None:
            return cls.UNKNOWN
        aliases = {"x->y": "XtoY", "y->x": "YtoX", "xtoy": "XtoY", "ytox": "YtoX"}
        return cls(aliases.get(str(value).strip().lower(), value))


@dataclass(frozen=True)
class LoadOptions:
    delimiter: str | None = None
    missing: str = "?"
    bin: int | None = None


@dataclass(frozen=True, eq=False)
class PairDataset:
    name: str
    x_labels: tuple
    y_labels: tuple
    table: ContingencyTable
    ground_truth: Truth = Truth.UNKNOWN
    x_cyclic: bool = False
    y_cyclic: bool = False

    @property
    def x_index(self):
        return {label: i for i, label in enumerate(self.x_labels)}

    @property
    def y_index(self):
        return {label: i for i, label in enumerate(self.y_labels)}


def _detect_delimiter(lines):
    for line in lines:
        if line.strip():
            if "\t" in line:
                return "\t"
            if "," in line:
                return ","
            return None
    return None


def _split(line, delim):
    if delim is None:
        return line.split()
    if delim == ",":
        return next(csv.reader([line]))
    return line.split(delim)


def _equal_frequency_bins(values, k):
    """Map numeric strings to ``k`` quantile bins labelled ``q0..q{k-1}``."""
    nums = np.array([float(v) for v in values])
    edges = np.quantile(nums, np.linspace(0, 1, k + 1))[1:-1]
    idx = np.searchsorted(edges, nums, side="right")
    return [f"q{i}" for i in idx]


def _maybe_bin(column, k):
    try:
        [float(v) for v in column]
    except ValueError:
        return column
    if len(set(column)) <= k:
        return column
    return _equal_frequency_bins(column, k)


def load_pair(path, options: LoadOptions | None = None, *, name=None,
              ground_truth=Truth.UNKNOWN, x_cyclic=False, y_cyclic=False) -> PairDataset:
    options = options or LoadOptions()
    path = Path(path)
    lines = path.read_text().splitlines()
    if options.delimiter is None:
        delim = _detect_delimiter(lines)
    else:
        delim = DELIMITERS.get(options.delimiter, options.delimiter)
    xs, ys = [], []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in _split(line, delim)]
        if len(fields) < 2:
            raise FewerThanTwoColumns(f"expected 2 fields, found {len(fields)}", lineno)
        if len(fields) > 2:
            raise ParseError(f"expected 2 fields, found {len(fields)}", lineno)
        if any(f == "" or f == options.missing for f in fields):
            continue
        xs.append(fields[0])
        ys.append(fields[1])
    if not xs:
        raise EmptyAfterFiltering(f"{path}: no complete records")
    if options.bin:
        xs, ys = _maybe_bin(xs, options.bin), _maybe_bin(ys, options.bin)
    x_labels = tuple(dict.fromkeys(xs))
    y_labels = tuple(dict.fromkeys(ys))
    xi = {v: i for i, v in enumerate(x_labels)}
    yi = {v: i for i, v in enumerate(y_labels)}
    counts = np.zeros((len(x_labels), len(y_labels)))
    np.add.at(counts, ([xi[v] for v in xs], [yi[v] for v in ys]), 1)
    return PairDataset(name or path.stem, x_labels, y_labels, ContingencyTable(counts),
                       Truth.parse(ground_truth), x_cyclic, y_cyclic)


def write_pair(dataset: PairDataset, path, delimiter="\t"):
    """Expand counts back to records in an order that preserves label order."""
    counts = np.asarray(dataset.table).round().astype(int)
    remaining = {(i, j) for i, j in zip(*np.nonzero(counts))}
    order = []
    seen_x = seen_y = 0
    while remaining:
        known = sorted(c for c in remaining if c[0] < seen_x and c[1] < seen_y)
        if known:
            pick = known[0]
        else:
            # introduce the next unseen label(s) exactly in first-appearance order
            fresh = [c for c in remaining if c[0] <= seen_x and c[1] <= seen_y]
            if not fresh:
                raise ValueError("labels are not in first-appearance order")
            pick = min(fresh)
        remaining.discard(pick)
        order.append(pick)
        seen_x = max(seen_x, pick[0] + 1)
        seen_y = max(seen_y, pick[1] + 1)
    with open(path, "w") as fh:
        for i, j in order:
            row = f"{dataset.x_labels[i]}{delimiter}{dataset.y_labels[j]}\n"
            fh.write(row * counts[i, j])


@dataclass
class BenchmarkReport:
    rows: list
    accuracy: float | None
    config: dict
    timings: list = field(default_factory=list)

    def to_dict(self, include_timings=False):
        doc = {"config": self.config, "accuracy": self.accuracy, "rows": self.rows}
        if include_timings:
            doc["timings"] = self.timings
        return doc

    def to_json(self, include_timings=False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2) + "\n"

    def to_tsv(self) -> str:
        if not self.rows:
            return ""
        cols = list(self.rows[0])
        buf = io.StringIO()
        buf.write("\t".join(cols) + "\n")
        for row in self.rows:
            buf.write("\t".join(_fmt(row.get(c)) for c in cols) + "\n")
        return buf.getvalue()

    def to_text(self) -> str:
        if not self.rows:
            return f"(no rows)\naccuracy: {_fmt(self.accuracy)}\n"
        cols = list(self.rows[0])
        cells = [[_fmt(r.get(c)) for c in cols] for r in self.rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
        lines.append(f"accuracy: {_fmt(self.accuracy)}")
        return "\n".join(lines) + "\n"


def _fmt(value):
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _config_echo(config: DecisionConfig):
    est = config.estimation
    return {
        "alpha": config.alpha,
        "forced": config.forced,
        "smoothing": est.smoothing,
        "cuc_max_iters": est.cuc_max_iters,
        "cuc_restarts": est.cuc_restarts,
        "rng_seed": est.rng_seed,
        "rng": RNG_ALGORITHM,
    }


def run_synthetic_experiment(grid, ns, trials, kind=Kind.GENERAL, seed=0,
                             estimation: EstimationConfig | None = None) -> BenchmarkReport:
    """Direction accuracy on random models whose true direction is X->Y.

    For each support size and trial one model is drawn and reused across all
    sample sizes; decisions are forced.  Cyclic runs fit cyclic channels in
    both directions.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    kind = Kind(kind)
    cyclic = kind is Kind.CYCLIC
    config = DecisionConfig(forced=True, x_cyclic=cyclic, y_cyclic=cyclic,
                            estimation=estimation or EstimationConfig(rng_seed=seed))
    rows, timings = [], []
    for ci, (nx, ny) in enumerate(grid):
        specs = [random_ucm((nx, ny), kind, (seed, 0, ci, t)) for t in range(trials)]
        for ni, n in enumerate(ns):
            start = time.perf_counter()
            correct = 0
            for t, spec in enumerate(specs):
                table = sample(spec, n, (seed, 1, ci, t, ni))
                if min(table.pruned().shape) < 2:
                    continue
                correct += decide(table, config).verdict is Verdict.X_TO_Y
            rows.append({"nx": nx, "ny": ny, "n": n, "trials": trials,
                         "correct": int(correct), "accuracy": correct / trials})
            timings.append(time.perf_counter() - start)
    echo = _config_echo(config) | {"experiment": "synthetic", "kind": kind.value,
                                    "grid": [list(c) for c in grid], "ns": list(ns),
                                    "trials": trials, "seed": seed}
    accuracy = float(np.mean([r["accuracy"] for r in rows])) if rows else None
    return BenchmarkReport(rows, accuracy, echo, timings)


@dataclass(frozen=True)
class CorpusEntry:
    path: str
    truth: Truth = Truth.UNKNOWN
    name: str | None = None
    x_cyclic: bool = False
    y_cyclic: bool = False
    options: LoadOptions = field(default_factory=LoadOptions)


def load_manifest(path) -> list:
    path = Path(path)
    doc = json.loads(path.read_text())
    items = doc["pairs"] if isinstance(doc, dict) else doc
    entries = []
    for item in items:
        p = Path(item["path"])
        if not p.is_absolute():
            p = path.parent / p
        entries.append(CorpusEntry(
            str(p),
            Truth.parse(item.get("truth")),
            item.get("name"),
            bool(item.get("x_cyclic", False)),
            bool(item.get("y_cyclic", False)),
            LoadOptions(item.get("delimiter"), item.get("missing", "?"), item.get("bin")),
        ))
    return entries


def manifest_from_pairmeta(pairmeta_path, data_dir=None) -> list:
    """Entries from a Tuebingen-style ``pairmeta.txt``.

    Each line reads ``id cause_first cause_last effect_first effect_last
    weight``; only single-column pairs are kept.
    """
    pairmeta_path = Path(pairmeta_path)
    data_dir = Path(data_dir) if data_dir else pairmeta_path.parent
    entries = []
    for line in pairmeta_path.read_text().splitlines():
        parts = line.split()
        if len(parts) < 5:
            continue
        pid, c1, c2, e1, e2 = parts[0], *map(int, parts[1:5])
        if (c1, c2, e1, e2) == (1, 1, 2, 2):
            truth = Truth.X_TO_Y
        elif (c1, c2, e1, e2) == (2, 2, 1, 1):
            truth = Truth.Y_TO_X
        else:
            continue
        entries.append(CorpusEntry(str(data_dir / f"{pid}.txt"), truth, pid))
    return entries


def run_corpus(entries, config: DecisionConfig | None = None,
               independence_alpha=0.05) -> BenchmarkReport:
    """Evaluate the decision rule on a list of ``CorpusEntry``.

    Pairs whose independence test is not rejected are marked ``independent``
    and left out of the accuracy, as are unloadable pairs and pairs without a
    known truth.  Undecided verdicts count as wrong.
    """
    config = config or DecisionConfig()
    rows, timings = [], []
    for entry in entries:
        start = time.perf_counter()
        row = {"name": entry.name or Path(entry.path).stem, "truth": entry.truth.value,
               "status": None, "verdict": None, "correct": None,
               "p_independence": None, "p_xy": None, "p_yx": None,
               "g2_xy": None, "g2_yx": None, "reason": None}
        try:
            ds = load_pair(entry.path, entry.options)
            table = ds.table.pruned()
            if min(table.shape) < 2:
                raise DegenerateTable(f"populated support {table.shape} is degenerate")
            indep = independence_test(table)
            row["p_independence"] = indep.p_value
            if indep.p_value >= independence_alpha:
                row["status"] = "independent"
            else:
                cfg = replace(config, x_cyclic=entry.x_cyclic, y_cyclic=entry.y_cyclic)
                dec = decide(table, cfg)
                row.update(status="decided" if dec.verdict.directional else "undecided",
                           verdict=dec.verdict.value, p_xy=dec.p_xy, p_yx=dec.p_yx,
                           g2_xy=dec.g2_xy, g2_yx=dec.g2_yx)
                if entry.truth is not Truth.UNKNOWN:
                    row["correct"] = dec.verdict.value == entry.truth.value
        except (UcmError, OSError) as exc:
            row.update(status="skipped", reason=f"{type(exc).__name__}: {exc}")
        rows.append(row)
        timings.append(time.perf_counter() - start)
    scored = [r["correct"] for r in rows if r["correct"] is not None]
    accuracy = sum(scored) / len(scored) if scored else None
    echo = _config_echo(config) | {"experiment": "corpus",
                                    "independence_alpha": independence_alpha,
                                    "pairs": len(entries)}
    return BenchmarkReport(rows, accuracy, echo, timings)
