import csv
import io
import json
import subprocess
import sys

import pytest

from ecmoments.cli import build_parser, config_from_args, main, ordered_map, worker_count


def _run(tmp_path, name, *argv):
    out = tmp_path / name
    code = main([*argv, "--output", str(out)])
    return code, out.read_bytes().decode("utf-8")


def test_verify_traces_passes(tmp_path):
    code, text = _run(tmp_path, "t.json", "verify-traces", "--pmax", "13")
    doc = json.loads(text)
    assert code == 0
    assert len(doc["results"]) == 52
    assert all(r["pass"] for r in doc["results"])
    assert doc["header"]["pmax"] == 13 and len(doc["header"]["build"]) == 12


def test_verify_qstar_passes_and_is_byte_stable(tmp_path):
    args = ("verify-qstar", "--pmax", "7", "--fmax", "8")
    code1, first = _run(tmp_path, "a.json", *args)
    code2, second = _run(tmp_path, "b.json", *args)
    assert code1 == code2 == 0
    assert first == second
    assert all(r["pass"] for r in json.loads(first)["results"])


def test_csv_report_parses(tmp_path):
    code, text = _run(tmp_path, "t.csv", "verify-traces", "--pmax", "7", "--jmax", "10", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][0].startswith("# ")
    assert json.loads(rows[0][0][2:])["command"] == "verify-traces"
    assert rows[1] == ["name", "computed", "expected", "tolerance", "pass"]
    assert all(r[4] == "True" for r in rows[2:])
    assert "\r\n" in text


def test_soft_commands_exit_zero(tmp_path):
    code, text = _run(tmp_path, "a.json", "afactor", "--ks", "0,1", "--pmax", "100")
    assert code == 0
    names = [r["name"] for r in json.loads(text)["results"]]
    assert names
    code, text = _run(tmp_path, "m.json", "moments", "--X", "1e4", "--sample", "6", "--k", "1", "--pmax", "100")
    assert code == 0
    results = {r["name"]: r for r in json.loads(text)["results"]}
    assert results["sample size"]["computed"] == 6


def test_rh_command(tmp_path):
    code, text = _run(tmp_path, "rh.json", "rh", "--X", "1e4", "--pmax", "100", "--ns", "2,5", "--alphas", "0.05")
    assert code == 0
    rows = json.loads(text)["results"]
    assert rows[-1]["pass"] is True


def test_worker_count_environment(monkeypatch):
    monkeypatch.delenv("ECM_THREADS", raising=False)
    assert worker_count(3) == 3
    monkeypatch.setenv("ECM_THREADS", "2")
    assert worker_count(5) == 2


def test_ordered_map_keeps_order():
    assert ordered_map(abs, [-3, 1, -2, 5], 2) == [3, 1, 2, 5]


def test_config_echo():
    args = build_parser().parse_args(["ratio", "--q", "5", "--class", "1,1", "--class2", "2,1", "--X", "1e6"])
    cfg = config_from_args(args)
    assert cfg.family.q == 5 and cfg.extra["classes"] == ((1, 1), (2, 1))
    with pytest.raises(SystemExit):
        build_parser().parse_args(["ratio", "--class", "1"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ecmoments", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "verify-traces" in out.stdout
