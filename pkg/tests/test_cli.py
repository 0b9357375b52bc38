"""Exit-code contract, report records, and byte-level determinism."""

import json
import os
import subprocess
import sys

import pytest

SRC = os.path.join(os.path.dirname(__file__), os.pardir, "src")


def run_cli(*args):
    env = dict(os.environ, PYTHONPATH=SRC)
    return subprocess.run(
        [sys.executable, "-m", "qcongruence", *args],
        capture_output=True, text=True, env=env,
    )


# one exit-code row per contract case: 0 pass, 1 fail, 2 usage/hypothesis
EXIT_MATRIX = [
    (("verify", "thm1", "--d", "5", "--r", "1", "--n", "4", "--trunc", "upper"), 0),
    (("verify", "thm1", "--d", "5", "--r", "3", "--n", "9"), 2),
    (("verify", "thm1", "--d", "5", "--r", "1", "--n", "8"), 2),
    (("verify", "thm2", "--d", "5", "--r", "1", "--n", "7", "--trunc", "full"), 0),
    (("verify", "conj1", "--d", "5", "--n", "9", "--trunc", "full"), 0),
    (("verify", "conj3", "--d", "5", "--r", "1", "--n", "7"), 0),
    (("verify", "lemma3", "--d", "5", "--r", "1", "--n", "4"), 0),
    (("verify", "lemma3", "--d", "5", "--r", "1", "--n", "5"), 2),
    (("verify", "lemma4", "--d", "5", "--r", "1", "--n", "7"), 0),
    (("verify", "lemma4", "--d", "5", "--r", "1", "--n", "8"), 2),
    (("verify", "modsquare", "--alpha", "1", "--r", "1", "--n", "7", "--d", "5"), 0),
    (("verify", "vanhamme", "--p", "5"), 0),
    (("verify", "vanhamme", "--p", "3"), 2),
    (("verify", "thm1", "--d", "5", "--r", "1"), 2),          # missing --n
    (("verify", "nonsense",), 2),
]


@pytest.mark.parametrize("args,code", EXIT_MATRIX, ids=[" ".join(a) for a, _ in EXIT_MATRIX])
def test_exit_codes(args, code):
    proc = run_cli(*args)
    assert proc.returncode == code, proc.stderr


def test_verify_fail_exit_code():
    # verified counterexample to the stated profile: FAIL -> exit 1
    proc = run_cli("verify", "thm1", "--d", "5", "--r", "1", "--n", "9")
    assert proc.returncode == 1
    rec = json.loads(proc.stdout)
    assert rec["status"] == "FAIL"
    assert rec["achieved"]["3"] == 0


def test_verify_record_shape():
    proc = run_cli("verify", "thm1", "--d", "5", "--r", "1", "--n", "4", "--oracle")
    rec = json.loads(proc.stdout)
    assert rec["command"] == "verify thm1"
    assert rec["case"] == {"d": 5, "r": 1, "n": 4, "variant": "thm1", "trunc": "upper"}
    assert rec["modulus"] == {"2": 1, "4": 3}
    assert rec["status"] == "PASS"
    assert rec["oracle"] == "PASS"
    assert rec["elapsed_ms"] is None
    assert rec["term_count"] == 4


def test_verify_power_override():
    proc = run_cli("verify", "thm2", "--d", "5", "--r", "1", "--n", "7",
                   "--power", "3")
    rec = json.loads(proc.stdout)
    assert rec["modulus"] == {"7": 4}
    assert proc.returncode == 0
    # the override can also push a true statement past its actual strength
    proc = run_cli("verify", "thm1", "--d", "5", "--r", "1", "--n", "4",
                   "--power", "3")
    rec = json.loads(proc.stdout)
    assert rec["modulus"] == {"2": 1, "4": 4}
    assert proc.returncode == 1 and rec["achieved"]["4"] == 3


def test_hypothesis_violations_named():
    proc = run_cli("verify", "thm1", "--d", "5", "--r", "3", "--n", "9")
    assert "r <= d - 4" in proc.stderr


def test_verify_output_file(tmp_path):
    out = tmp_path / "check.jsonl"
    proc = run_cli("verify", "vanhamme", "--p", "7", "--output", str(out))
    assert proc.returncode == 0 and proc.stdout == ""
    rec = json.loads(out.read_text())
    assert rec["status"] == "PASS" and rec["modulus"] == {"7": 4}


def test_identity_commands():
    proc = run_cli("identity", "andrews", "--m", "2", "--N", "3",
                   "--trials", "4", "--seed", "42")
    assert proc.returncode == 0
    records = [json.loads(line) for line in proc.stdout.splitlines()]
    assert len(records) == 4
    assert all(r["status"] == "PASS" for r in records)
    proc = run_cli("identity", "gasper-km", "--m", "2", "--N", "3",
                   "--trials", "4", "--seed", "7")
    assert proc.returncode == 0
    proc = run_cli("identity", "multi-km", "--m", "3", "--trials", "2", "--seed", "1")
    assert proc.returncode == 0


def test_identity_deterministic_for_seed():
    a = run_cli("identity", "watson", "--trials", "3", "--seed", "5").stdout
    b = run_cli("identity", "watson", "--trials", "3", "--seed", "5").stdout
    assert a == b


def test_sweep_deterministic_across_jobs(tmp_path):
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    base = ("sweep", "--theorem", "thm2", "--d-max", "5", "--n-max", "9",
            "--r-min", "-3", "--r-max", "1", "--seed", "11")
    p1 = run_cli(*base, "--jobs", "1", "--output", str(out1))
    p2 = run_cli(*base, "--jobs", "3", "--output", str(out2))
    assert p1.returncode == p2.returncode
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_empty_grid():
    proc = run_cli("sweep", "--theorem", "thm1", "--d-max", "5", "--n-max", "3",
                   "--r-min", "1", "--r-max", "1")
    assert proc.returncode == 0
    header = json.loads(proc.stdout.splitlines()[0])
    assert header["cases"] == 0


def test_sweep_conjecture_mode_informational():
    # conjecture sweeps exit 0 regardless of verdicts
    proc = run_cli("sweep", "--conjecture", "conj3", "--d-max", "5",
                   "--n-max", "8", "--r-min", "-1", "--r-max", "-1")
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    statuses = {json.loads(l)["status"] for l in lines[1:]}
    assert statuses  # records were produced


def test_sweep_bounds_guard():
    proc = run_cli("sweep", "--theorem", "thm1", "--d-max", "11", "--n-max", "10")
    assert proc.returncode == 2
