import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gdop import cli
from gdop import verify as verify_mod


def _config(tmp_path, **kw):
    doc = {"functions": ["e2"], "n_values": [2], "alphas": ["1/2"], "r": 1.0}
    doc.update(kw)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    return str(path)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_e2_row(tmp_path, capsys):
    assert cli.main(["sweep", "--config", _config(tmp_path), "--jobs", "1"]) == 0
    (row,) = _rows(capsys.readouterr().out)
    assert row["f_label"] == "e2" and row["alpha"] == "1/2"
    assert float(row["sup_error"]) == pytest.approx(5 / 3)
    assert float(row["bound"]) == 2.0
    assert list(row) == [
        "f_label", "n", "alpha", "r", "sup_error", "bound", "bound_ratio", "voronovskaja_residual",
    ]


def test_sweep_derivative_columns(tmp_path, capsys):
    cfg = _config(tmp_path, functions=["exp"], n_values=[4, 8], l_values=[1, 2], r1=1.5)
    assert cli.main(["sweep", "--config", cfg, "--jobs", "1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 2
    assert {"derivative_error_l1", "derivative_bound_l1", "derivative_error_l2"} <= set(rows[0])


@pytest.mark.parametrize(
    "bad",
    [
        {"n_values": []},
        {"alphas": ["0.5"]},
        {"functions": ["nope"]},
        {"r": 0.5},
        {"functions": ["inv_2_minus_z"], "r": 2.5},
        {"l_values": [1]},
        {"unknown": 1},
        {"output_format": "xml"},
    ],
)
def test_sweep_config_errors(tmp_path, bad):
    assert cli.main(["sweep", "--config", _config(tmp_path, **bad)]) == 2


def test_sweep_missing_file(tmp_path):
    assert cli.main(["sweep", "--config", str(tmp_path / "missing.json")]) == 2


def test_sweep_deterministic(tmp_path):
    cfg = _config(tmp_path, functions=["exp", "sin"], n_values=[4, 16], alphas=["0", "1/3"])
    runs = [
        subprocess.run(
            [sys.executable, "-m", "gdop.cli", "sweep", "--config", cfg, "--jobs", str(j)],
            capture_output=True,
            check=True,
        ).stdout
        for j in (1, 2, 2)
    ]
    assert runs[0] == runs[1] == runs[2]
    assert len(runs[0].splitlines()) == 1 + 8


def test_sweep_json_output_file(tmp_path):
    out = tmp_path / "out.json"
    cfg = _config(tmp_path, output_format="json", output_path=str(out))
    assert cli.main(["sweep", "--config", cfg, "--jobs", "1"]) == 0
    (row,) = json.loads(out.read_text())["rows"]
    assert row["n"] == 2 and row["bound"] == 2.0


def test_sweep_coefficient_file(tmp_path, capsys):
    (tmp_path / "quad.json").write_text(json.dumps({"label": "quad", "coeffs": [[0, 0], [0, 0], [1, 0]]}))
    cfg = _config(tmp_path, functions=["quad.json"])
    assert cli.main(["sweep", "--config", cfg, "--jobs", "1"]) == 0
    (row,) = _rows(capsys.readouterr().out)
    assert row["f_label"] == "quad" and float(row["sup_error"]) == pytest.approx(5 / 3)


def test_bound_violation_exit_code(tmp_path, monkeypatch):
    from gdop.analysis import ConvergenceRecord

    def broken(*a, **kw):
        return ConvergenceRecord(2, Fraction(1, 2), 1.0, "e2", 9.0, 1.0, 0.0)

    monkeypatch.setattr(cli, "measure", broken)
    assert cli.main(["sweep", "--config", _config(tmp_path), "--jobs", "1"]) == 3


def test_default_jobs_env(monkeypatch):
    monkeypatch.setenv("GDOP_JOBS", "3")
    assert cli.default_jobs() == 3
    monkeypatch.delenv("GDOP_JOBS")
    assert cli.default_jobs() >= 1


def test_verify_fast(capsys):
    assert cli.main(["verify"]) == 0
    assert "checks passed" in capsys.readouterr().out


def test_verify_fault_injection(monkeypatch, capsys):
    monkeypatch.setattr(verify_mod, "FAULT_INJECTION", (5, Fraction(1, 2), 3))
    assert cli.main(["verify"]) == 1
    err = capsys.readouterr().err
    assert "(n=5, alpha=1/2, p=3)" in err


def test_export_examples(tmp_path):
    out = tmp_path / "m.json"
    assert cli.main(["export-moments", "--n", "2", "--alpha", "1/2", "--max-p", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["images"][2] == ["0", "5/6", "1/6"]
    assert cli.main(["export-moments", "--n", "5", "--alpha", "1", "--max-p", "1", "--out", str(out),
                     "--method", "recurrence"]) == 0
    assert json.loads(out.read_text())["images"][1] == ["0", "1"]


@pytest.mark.parametrize("args", [["--alpha", "0.5", "--max-p", "2"], ["--alpha", "1/2", "--max-p", "200"]])
def test_export_errors(tmp_path, args):
    assert cli.main(["export-moments", "--n", "4", *args, "--out", str(tmp_path / "x.json")]) == 2


def test_bad_arguments():
    assert cli.main(["sweep"]) == 2
    assert cli.main(["frobnicate"]) == 2
