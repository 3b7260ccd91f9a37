import json
import subprocess
import sys

import pytest

from slopecert.cli import JOB_SCHEMAS, canonical_json, run_job


def invoke(tmp_path, job, extra=()):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    return subprocess.run(
        [sys.executable, "-m", "slopecert.cli", "--job", str(path), *extra],
        capture_output=True,
        text=True,
    )


def test_replay_job_matches_worked_example(tmp_path):
    job = {"command": "replay-sp", "params": {"n": 2, "locals": [{"p": 3}], "seeds": "zero"}}
    proc = invoke(tmp_path, job)
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert report["result"]["verdict"] == "ArtinPlusIrreducible"
    assert report["result"]["places"][0]["k1"] == [[6, 4]]
    assert report["result"]["places"][0]["x2_prime"] == ["1/1", "-27/1"]


def test_reports_byte_identical(tmp_path):
    job = {
        "command": "replay-so",
        "params": {"n": 1, "locals": [{"p": 5, "e": 2}], "seeds": [["1/2", "0"]]},
    }
    a = invoke(tmp_path, job)
    b = invoke(tmp_path, job)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_out_file_written_atomically(tmp_path):
    out = tmp_path / "report.json"
    job = {
        "command": "hilbert",
        "params": {"a": "-1", "b": "-1", "place": 2},
        "out": str(out),
    }
    proc = invoke(tmp_path, job)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["result"]["symbol"] == -1


def test_verify_cert_roundtrip_and_tamper(tmp_path):
    job = {"command": "replay-sp", "params": {"n": 1, "locals": [{"p": 3}], "seeds": "zero"}}
    cert = json.loads(invoke(tmp_path, job).stdout)["result"]
    ok = invoke(tmp_path, {"command": "verify-cert", "params": {"certificate": cert}})
    assert ok.returncode == 0 and json.loads(ok.stdout)["result"]["ok"]
    cert["places"][0]["x1_prime"][0] = "5/1"
    bad = invoke(tmp_path, {"command": "verify-cert", "params": {"certificate": cert}})
    assert bad.returncode == 2
    assert not json.loads(bad.stdout)["result"]["ok"]


def test_run_job_validates_before_dispatch():
    from slopecert.cli import InputError

    with pytest.raises(InputError):
        run_job({"command": "hilbert", "params": {"a": "-1", "b": "-1"}})
    report, code = run_job(
        {"command": "hilbert", "params": {"a": "-1", "b": "-1", "place": 2}}
    )
    assert code == 0 and report["result"]["symbol"] == -1


def test_precondition_violation_is_input_error(tmp_path):
    proc = invoke(tmp_path, {"command": "hilbert", "params": {"a": "0", "b": "3", "place": 5}})
    assert proc.returncode == 1


def test_schema_violation_reports_field_path(tmp_path):
    proc = invoke(
        tmp_path,
        {"command": "replay-sp", "params": {"n": 0, "locals": [{"p": 3}], "seeds": "zero"}},
    )
    assert proc.returncode == 1
    assert "params.n" in proc.stderr


def test_unknown_command_rejected(tmp_path):
    proc = invoke(tmp_path, {"command": "frobnicate", "params": {}})
    assert proc.returncode == 1


def test_scan_job_and_workers_flag(tmp_path):
    job = {
        "command": "keylemma-scan",
        "params": {"n_max": 2, "kappa_min": -1, "kappa_max": 1, "ef": [[1, 1]], "band_scale": 1},
    }
    a = invoke(tmp_path, job)
    b = invoke(tmp_path, job, extra=("--workers", "2"))
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout


def test_wald_job(tmp_path):
    job = {
        "command": "wald-sign",
        "params": {
            "p": 5,
            "m": 2,
            "split_values": ["2"],
            "field_elements": [{"d": 2, "a": "1", "b": "1"}],
        },
    }
    proc = invoke(tmp_path, job)
    out = json.loads(proc.stdout)
    assert proc.returncode == 0 and out["result"]["sign"] == 1
    assert all(entry["match"] for entry in out["result"]["structure"])


def test_print_schemas():
    proc = subprocess.run(
        [sys.executable, "-m", "slopecert.cli", "--print-schemas"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert set(doc["params"]) == set(JOB_SCHEMAS)


def test_canonical_json_is_sorted():
    text = canonical_json({"b": 1, "a": [2, 3]})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")
