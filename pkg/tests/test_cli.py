import csv
import io
import json
from pathlib import Path

import pytest

from shatterlab.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_vc_intervals(capsys):
    code, out, _ = run(capsys, "vc", "--input", DATA / "intervals.json")
    assert code == 0
    assert "VC = 2" in out and "certificate = {1,2}" in out


def test_pac_rect_auto(capsys):
    code, out, _ = run(capsys, "pac-rect", "--eps", 0.1, "--delta", 0.1, "--m", "auto", "--trials", 200)
    assert code == 0
    assert "m = 148" in out and "empirical failure rate" in out


def test_verify_chain_document(capsys):
    code, out, _ = run(capsys, "verify", "chain", "--input", DATA / "classes.json", "--connective", "mul", "--eps", 0.5,
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == 0 and all(r["holds"] for r in rep["rows"])


def test_json_is_byte_identical(capsys, tmp_path):
    args = ["pac-rect", "--trials", 100, "--format", "json", "--seed", 7]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args, "--threads", 3)
    assert first == second
    assert json.loads(first)["seed"] == 7


def test_csv_schema_and_rows(capsys, tmp_path):
    rows_path = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "pac-rect", "--trials", 20, "--format", "csv", "--rows-out", rows_path)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "#schema=1" and lines[1] == "trial,error,failure"
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert len(rows) == 20 and rows_path.read_text() == out


def test_experiment_config(capsys, tmp_path):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({"eps": 0.5, "delta": 0.5, "m": "auto", "trials": 10, "seed": 1,
                               "target": [0, 0.5, 0, 0.5], "distribution": {"kind": "uniform-box"}}))
    code, out, _ = run(capsys, "pac-rect", "--config", cfg, "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["m"] == 17 and rep["trials"] == 10
    cfg.write_text('{"eps": 0.5, "oops": 1}')
    assert run(capsys, "pac-rect", "--config", cfg)[0] == 1


def test_out_path(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "alpha", "--k", 2, "--format", "json", "--out", out)
    assert code == 0 and stdout == "" and json.loads(out.read_text())["alpha"] == 6


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["fat", "--input", DATA / "powerset3.json", "--eps", 0.5], 0),
        (["growth", "--input", DATA / "intervals.json", "--n-max", 3], 0),
        (["sauer", "--n", 10, "--d", 2], 0),
        (["sauer", "--input", DATA / "intervals.json"], 0),
        (["cover", "--input", DATA / "classes.json", "--eps", 0.3], 0),
        (["entropy", "--input", DATA / "intervals.json", "--eps", 0.2], 0),
        (["compose-c", "--input", DATA / "powerset3.json", "--connective", "imp"], 0),
        (["compose-f", "--input", DATA / "classes.json", "--connective", "min"], 0),
        (["bound-main", "--eps", 0.5, "--fat", 2, 3], 0),
        (["bound-main", "--input", DATA / "classes.json", "--eps", 0.5], 0),
        (["bound-mv", "--eps", 0.5, "--fat", 3], 0),
        (["counterexample", "--powerset", 3, "--eps", 0.1], 0),
        (["verify", "modulus", "--connective", "mul", "--samples", 5000], 0),
        (["verify", "modulus", "--connective", "mul", "--delta-factor", 2, "--eps", 0.1, 0.25, 0.5], 3),
        (["verify", "phi", "--input", DATA / "classes.json", "--samples", 500], 0),
        (["verify", "product", "--instances", 20], 0),
        (["verify", "image", "--instances", 20], 0),
        (["verify", "sauer", "--instances", 5], 0),
        (["verify", "vc-comp", "--instances", 5], 0),
        (["verify", "cover", "--instances", 5], 0),
        (["vc", "--input", "/nonexistent.json"], 1),
        (["sauer", "--n", 1, "--d", 2], 1),
        (["fat", "--input", DATA / "powerset3.json", "--eps", 2], 1),
        (["compose-c", "--input", DATA / "powerset3.json", "--connective", "xor", "--class-cap", 10], 2),
        (["cover", "--input", DATA / "intervals.json", "--eps", 0.3, "--cover-cap", 5], 2),
        (["vc", "--no-such-flag"], 1),
    ],
)
def test_exit_codes(capsys, argv, expected):
    assert run(capsys, *argv)[0] == expected


def test_bound_main_value(capsys):
    _, out, _ = run(capsys, "bound-main", "--eps", 0.5, "--fat", 2, 3, "--format", "json")
    rep = json.loads(out)
    assert rep["multiplier"] == pytest.approx(7.5) and rep["rhs"] == pytest.approx(37.5) and rep["conditional"]


def test_bad_document_diagnostics(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": ["a", "b"],\n "concepts": ["10", "1x"]}')
    code, _, err = run(capsys, "vc", "--input", bad)
    assert code == 1 and "concepts[1]" in err
    bad.write_text('{"points": ["a"]\n "concepts": []}')
    code, _, err = run(capsys, "vc", "--input", bad)
    assert code == 1 and "line 2" in err


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("SHATTERLAB_THREADS", "nope")
    assert run(capsys, "pac-rect", "--trials", 5)[0] == 1
    monkeypatch.setenv("SHATTERLAB_THREADS", "2")
    assert run(capsys, "pac-rect", "--trials", 5)[0] == 0


def test_verify_violation_iff_exit_three(capsys):
    code, out, _ = run(capsys, "verify", "modulus", "--connective", "mul", "--delta-factor", 2, "--eps", 0.25,
                       "--format", "json")
    assert (code == 3) == (json.loads(out)["violations"] > 0)
