import json
import math

import pytest

from rips_critical.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.fixture
def square_csv(tmp_path):
    p = tmp_path / "square.csv"
    p.write_text("x,y\n0,0\n1,0\n1,1\n0,1\n")
    return p


def test_generate(tmp_path, capsys):
    code, _ = run(capsys, "generate", "circle", "--n", "200", "--radius", "1", "--out", str(tmp_path / "c"))
    assert code == 0
    assert len((tmp_path / "c" / "points.csv").read_text().splitlines()) == 201
    code, _ = run(capsys, "generate", "ladder", "--k", "6", "--gap", "0.04", "--height", "1", "--out", str(tmp_path / "l"))
    assert code == 0
    assert len((tmp_path / "l" / "matrix.csv").read_text().splitlines()) == 12
    code, _ = run(capsys, "generate", "witness-triangle", "--c", "1", "--h", "0.3", "--out", str(tmp_path / "w"))
    assert code == 0
    assert len((tmp_path / "w" / "points.csv").read_text().splitlines()) == 4
    code, _ = run(capsys, "generate", "clusters", "--out", str(tmp_path / "k"))
    assert code == 0


def test_generate_bad_params(tmp_path, capsys):
    code, out = run(capsys, "generate", "ladder", "--k", "6", "--gap", "0.5", "--out", str(tmp_path))
    assert code == 2 and "gap" in out.err


def test_persistence_square(tmp_path, capsys, square_csv):
    code, out = run(capsys, "persistence", "--input", str(square_csv), "--out", str(tmp_path / "o"))
    assert code == 0 and out.out == ""
    rows = json.loads((tmp_path / "o" / "barcode.json").read_text())
    assert {"dim": 1, "birth": 1.0, "death": math.sqrt(2)} in rows
    assert (tmp_path / "o" / "diagram.svg").read_text().startswith("<svg")
    code, _ = run(capsys, "persistence", "--input", str(square_csv), "--convention", "selective",
                  "--lambda", "1", "--out", str(tmp_path / "s"))
    assert code == 0
    assert (tmp_path / "s" / "barcode.json").read_text() == (tmp_path / "o" / "barcode.json").read_text()


def test_persistence_matrix_input(tmp_path, capsys):
    m = tmp_path / "m.csv"
    m.write_text("0\n1,0\n1.4142135623730951,1,0\n1,1.4142135623730951,1,0\n")
    code, _ = run(capsys, "persistence", "--input", str(m), "--format", "matrix", "--out", str(tmp_path / "o"))
    assert code == 0
    rows = json.loads((tmp_path / "o" / "barcode.json").read_text())
    assert [r for r in rows if r["dim"] == 1] == [{"dim": 1, "birth": 1.0, "death": math.sqrt(2)}]


def test_persistence_errors(tmp_path, capsys, square_csv):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run(capsys, "persistence", "--input", str(empty), "--out", str(tmp_path))[0] == 1
    assert run(capsys, "persistence", "--input", str(tmp_path / "missing.csv"), "--out", str(tmp_path))[0] == 1
    assert run(capsys, "persistence", "--input", str(square_csv), "--convention", "selective",
               "--out", str(tmp_path))[0] == 2
    assert run(capsys, "persistence", "--input", str(square_csv), "--convention", "selective",
               "--lambda", "1.5", "--out", str(tmp_path))[0] == 2


def test_analyze_witness(tmp_path, capsys):
    run(capsys, "generate", "witness-triangle", "--out", str(tmp_path / "w"))
    pts = str(tmp_path / "w" / "points.csv")
    code, out = run(capsys, "analyze", "--input", pts, "--out", str(tmp_path / "a"), "--summary")
    assert code == 0 and out.out.count("\n") == 1
    verdicts = json.loads((tmp_path / "a" / "verdicts.json").read_text())["verdicts"]
    assert verdicts == [{"pair": [0, 1], "c": 1.0, "witness": 2, "predicted_in_spectrum": False,
                         "observed_in_spectrum": False, "agree": True}]
    for name in ("minima.csv", "bounds.json", "containment.json"):
        assert (tmp_path / "a" / name).exists()

    code, _ = run(capsys, "analyze", "--input", pts, "--lambda", "0.4", "--out", str(tmp_path / "b"))
    assert code == 0
    sel = json.loads((tmp_path / "b" / "selective.json").read_text())
    flagged = [r for r in sel["records"] if r["c"] == 1.0]
    assert flagged[0]["detected"] and flagged[0]["h1_birth"]


def test_analyze_explicit_epsilon(tmp_path, capsys, square_csv):
    code, _ = run(capsys, "analyze", "--input", str(square_csv), "--epsilon", "0.3", "--out", str(tmp_path))
    assert code == 0
    bounds = json.loads((tmp_path / "bounds.json").read_text())
    row = next(r for r in bounds["rows"] if r["c"] == 1.0)
    assert row["slack"] == 0


def test_verify_small_suite_is_deterministic(tmp_path, capsys):
    args = ["verify", "--trials", "5", "--seed", "7", "--summary"]
    code, out = run(capsys, *args, "--out", str(tmp_path / "a"))
    assert code == 0 and "violations=0" in out.out
    run(capsys, *args, "--out", str(tmp_path / "b"))
    a = (tmp_path / "a" / "summary.json").read_bytes()
    assert a == (tmp_path / "b" / "summary.json").read_bytes()
    summary = json.loads(a)
    assert summary["criterion"]["violations"] == 0


def test_analyze_random_suite_with_jobs(tmp_path, capsys):
    code, _ = run(capsys, "analyze", "--trials", "4", "--seed", "3", "--jobs", "2", "--out", str(tmp_path / "j"))
    assert code == 0
    run(capsys, "analyze", "--trials", "4", "--seed", "3", "--out", str(tmp_path / "s"))
    assert (tmp_path / "j" / "summary.json").read_bytes() == (tmp_path / "s" / "summary.json").read_bytes()
