import json

import numpy as np
import pytest

from ucm.cli import main
from ucm.synthetic import random_ucm, sample


@pytest.fixture
def pair_file(tmp_path):
    table = np.asarray(sample(random_ucm((3, 3), "general", 3), 2000, 3))
    lines = [f"x{i}\ty{j}\n" for i, j in np.argwhere(table > 0) for _ in range(int(table[i, j]))]
    path = tmp_path / "pair.txt"
    path.write_text("".join(lines))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("kind", ["uc", "cuc", "arbitrary"])
def test_estimate(capsys, pair_file, kind):
    code, out, _ = run(capsys, "estimate", pair_file, "--kind", kind)
    assert code == 0
    doc = json.loads(out)
    assert doc["x_labels"] == ["x0", "x1", "x2"]
    assert np.isfinite(doc["log_likelihood"])


def test_decide(capsys, pair_file):
    code, out, _ = run(capsys, "decide", pair_file)
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "XtoY"
    assert doc["pair"] == "pair"
    code, out, _ = run(capsys, "decide", pair_file, "--forced", "--y-cyclic")
    assert json.loads(out)["verdict"] in ("XtoY", "YtoX")


def test_decide_undecided_still_exits_zero(capsys, tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("a 1\n" * 60 + "b 2\n" * 60 + "a 2\n" * 3 + "b 1\n" * 3)
    code, out, _ = run(capsys, "decide", path)
    assert code == 0 and json.loads(out)["verdict"] == "UndecidedBothPossible"


def test_errors_exit_two(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("a 1\nb\n")
    code, _, err = run(capsys, "decide", path)
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "estimate", tmp_path / "nope.txt")
    assert code == 2
    path.write_text("a 1\na 2\n")
    code, _, err = run(capsys, "decide", path)
    assert code == 2


def test_simulate(capsys, tmp_path):
    tsv, js = tmp_path / "fig.tsv", tmp_path / "fig.json"
    code, out, _ = run(capsys, "simulate", "--sizes", "2x2,3x3", "--ns", "50,100",
                       "--trials", 3, "--seed", 1, "--out", tsv, "--json", js)
    assert code == 0
    rows = tsv.read_text().splitlines()
    assert rows[0].split("\t")[:3] == ["nx", "ny", "n"] and len(rows) == 5
    assert len(json.loads(js.read_text())["rows"]) == 4
    first = tsv.read_text()
    run(capsys, "simulate", "--sizes", "2x2,3x3", "--ns", "50,100",
        "--trials", 3, "--seed", 1, "--out", tsv)
    assert tsv.read_text() == first


def test_benchmark(capsys, tmp_path, pair_file):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps([{"path": pair_file.name, "truth": "x->y"}]))
    out_json = tmp_path / "r.json"
    code, out, _ = run(capsys, "benchmark", "--manifest", manifest, "--out", out_json)
    assert code == 0
    doc = json.loads(out_json.read_text())
    assert doc["rows"][0]["verdict"] == "XtoY" and doc["accuracy"] == 1.0
    assert "timings" not in doc


def test_benchmark_requires_corpus(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["benchmark"])
    assert exc.value.code == 2
