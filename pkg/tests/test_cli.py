import csv
import json
import subprocess
import sys

import pytest

from supershift_lab.cli import main

SUPEROSC = ["superosc", "--a", "1", "--x", "0:1:0.5", "--n", "5", "--eps", "zero"]
ENVELOPE = {"tool", "version", "command", "precision", "config", "bits_used", "thresholds",
            "verdict", "result"}


def run_json(tmp_path, argv, name="out"):
    path = tmp_path / f"{name}.json"
    code = main(argv + ["--out", str(path), "--format", "json"])
    return code, (json.loads(path.read_text()) if path.exists() else None)


def test_superosc_exit_zero_and_envelope(tmp_path):
    code, doc = run_json(tmp_path, SUPEROSC)
    assert code == 0
    assert set(doc) == ENVELOPE
    assert doc["command"] == "superosc" and doc["verdict"] == "pass"
    assert "jobs" not in doc["config"] and "out" not in doc["config"]


def test_csv_output(tmp_path):
    base = tmp_path / "res"
    assert main(SUPEROSC + ["--out", str(base), "--format", "both"]) == 0
    rows = list(csv.reader((tmp_path / "res.csv").open(newline="")))
    assert len(rows) > 1 and all(len(r) == len(rows[0]) for r in rows)
    assert b"\r\n" not in (tmp_path / "res.csv").read_bytes()
    assert (tmp_path / "res.json").exists()


def test_negative_range_argument(tmp_path):
    code, doc = run_json(tmp_path, ["superosc", "--a", "2", "--x", "-1:1:0.5", "--n", "10,20,40,80"])
    assert code == 0 and doc["verdict"] == "pass"


def test_jobs_do_not_change_output(tmp_path):
    argv = ["supershift", "check", "--catalog", "exp_linear", "--n", "10,20,40", "--grid-step", "0.5"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(argv + ["--jobs", "1", "--out", str(a), "--format", "json"]) == 0
    assert main(argv + ["--jobs", "2", "--out", str(b), "--format", "json"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_supershift_check_with_spec_file(tmp_path):
    spec = tmp_path / "psi.json"
    spec.write_text(json.dumps({"kind": "exp_linear", "lambda": [0.3, 0.0]}))
    code, doc = run_json(tmp_path, ["supershift", "check", "--psi", str(spec), "--n", "10,20,40",
                                    "--grid-step", "0.5"])
    assert code == 0 and doc["verdict"] == "pass"


def test_degenerate_kantorovich_exit_three(tmp_path, capsys):
    assert main(["kantorovich", "--gminus", "1,-2", "--gplus", "1,-2"]) == 3
    assert "ERROR DEGENERATE" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["superosc", "--a", "2"],
    ["superosc", "--a", "two", "--x", "0:1:0.5", "--n", "5"],
    ["superosc", "--a", "2", "--x", "0:1", "--n", "5"],
    ["nonsense"],
    ["evolve", "--potential", "free", "--a", "2", "--t", "0:1:0.5", "--x", "0:1:0.5", "--n", "0,x"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "ERROR USAGE" in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    assert main(SUPEROSC + ["--out", str(tmp_path / "missing" / "dir" / "x"), "--format", "json"]) == 2


def test_precision_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SUPERSHIFT_LAB_PRECISION", "300")
    code, doc = run_json(tmp_path, SUPEROSC)
    assert code == 0 and doc["bits_used"] == 300


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "supershift_lab.cli", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "supershift-lab" in out.stdout
