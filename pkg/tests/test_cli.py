from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from evenbly import cli
from evenbly.codegen import StabilizerCode


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_round_trip(tmp_path, capsys):
    path = tmp_path / "code.json"
    code, out, _ = run(capsys, "build", "--layers", "1", "--layout", "max-rate", "--out", str(path))
    assert code == cli.EXIT_OK
    assert "n=20 k=13" in out
    data = json.loads(path.read_text())
    back = StabilizerCode.from_dict(data["code"])
    back.verify()
    assert (back.n, back.k) == (20, 13)


def test_build_from_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p": 6, "q": 4, "layers": 1, "gauge": "Y"}))
    code, out, _ = run(capsys, "build", "--config", str(cfg))
    assert code == cli.EXIT_OK and "k=1 " in out


@pytest.mark.parametrize("argv", [
    ["build", "--p", "4", "--q", "4"],
    ["build", "--layers", "9", "--max-qubits", "100"],
    ["build", "--gauge", "W"],
    ["sweep", "--decoder", "pauli", "--kind", "erasure"],
    ["sweep", "--p-grid", "0.5:0.1:0.1"],
    ["decode", "--erasure", "0110"],
    ["decode"],
    ["analytics", "--table", "distance", "--p", "6"],
    ["nonsense"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == cli.EXIT_CONFIG


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "build", "--config", str(cfg))[0] == cli.EXIT_CONFIG


def test_computation_error_exits_3(capsys, monkeypatch):
    def boom(cfg):
        raise RuntimeError("worker died")

    monkeypatch.setattr(cli, "sweep", boom)
    code, _, err = run(capsys, "sweep", "--layers", "0", "--trials", "0=5", "--p-grid", "0.1")
    assert code == cli.EXIT_COMPUTE and "worker died" in err


def test_analytics_tables(capsys):
    code, out, _ = run(capsys, "analytics", "--L-max", "2")
    rows = list(csv.DictReader(out.splitlines()))
    assert [(r["n"], r["k"]) for r in rows] == [("4", "1"), ("20", "13"), ("76", "61")]
    code, out, _ = run(capsys, "analytics", "--table", "distance", "--L-max", "3")
    rows = list(csv.DictReader(out.splitlines()))
    assert [int(r["X_total"]) for r in rows] == [2, 2, 6, 14]
    assert [int(r["Z_total"]) for r in rows] == [2, 6, 14, 34]


def test_decode_commands(capsys):
    code, out, _ = run(capsys, "decode", "--layers", "0", "--erasure", "1000")
    assert code == 0 and json.loads(out)["success"] is True
    code, out, _ = run(capsys, "decode", "--layers", "0", "--erasure", "4:0,1", "--decoder", "greedy")
    assert code == 0 and json.loads(out)["success"] is False
    code, out, _ = run(capsys, "decode", "--layers", "0", "--error", "IIZZ")
    assert code == 0 and json.loads(out)["success"] is False
    assert run(capsys, "decode", "--layers", "0", "--error", "IIZZ", "--decoder", "greedy")[0] == 2
    assert run(capsys, "decode", "--layers", "0", "--error", "IZZ")[0] == 2


def test_sweep_and_threshold(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--layers", "1,2", "--trials", "1=200,2=60", "--p-grid", "0.3:0.7:0.05",
                     "--seed", "3", "--out", str(path))
    assert code == cli.EXIT_OK
    meta = json.loads(path.with_suffix(".json").read_text())
    assert meta["seed"] == 3 and meta["config"]["layers"] == [1, 2]
    out_json = tmp_path / "t.json"
    code, _, _ = run(capsys, "threshold", str(path), "--resamples", "20", "--out", str(out_json))
    assert code == cli.EXIT_OK
    report = json.loads(out_json.read_text())
    (row,) = report["thresholds"]
    assert row["L_pair"] == [1, 2] and row["kind"] == "erasure"
    assert run(capsys, "threshold", str(tmp_path / "missing.csv"))[0] == cli.EXIT_CONFIG


def test_sweep_threads_give_identical_csv(tmp_path, capsys):
    paths = []
    for threads in ("1", "2"):
        p = tmp_path / f"t{threads}.csv"
        run(capsys, "sweep", "--layers", "0,1", "--trials", "0=50,1=50", "--p-grid", "0.1,0.4",
            "--threads", threads, "--chunk", "10", "--out", str(p))
        paths.append(p.read_text())
    assert paths[0] == paths[1]


def test_console_module_runs():
    res = subprocess.run([sys.executable, "-m", "evenbly", "analytics", "--L-max", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("L,n,k,rate")
