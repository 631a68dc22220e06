from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from cnqkz import cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_macdonald_text_golden(capsys):
    code, out, _ = run(capsys, "macdonald", "--n", "1", "--lambda", "2")
    assert code == 0
    assert out == (GOLDEN / "macdonald_n1_l2.txt").read_text()


def test_macdonald_json_golden(capsys):
    code, out, _ = run(capsys, "macdonald", "--n", "2", "--lambda", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data == json.loads((GOLDEN / "macdonald_n2_l2.json").read_text())
    assert data["schema"] == "1"
    assert {"n", "lambda", "monomial_expansion", "m_basis_expansion", "eigenvalue"} <= set(data)


def test_integral_golden(capsys):
    code, out, _ = run(capsys, "integral", "--n", "1", "--lambda", "1", "--y", "0.9", "--format", "json")
    assert code == 0
    got, ref = json.loads(out), json.loads((GOLDEN / "integral_n1_l1.json").read_text())
    assert got["terms_used"] == ref["terms_used"]
    assert got["value"] == pytest.approx(ref["value"], rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("suite", ["ybe", "hecke", "eigen", "qkz-numeric", "cor51"])
def test_verify_passes_and_self_test_fails(capsys, suite):
    code, out, err = run(capsys, "verify", suite, "--n", "2", "--lambda", "1", "--points", "1")
    assert code == 0, err
    data = json.loads(out)
    assert data["passed"] and data["schema"] == "1" and data["seed"] == 0
    code, out, _ = run(capsys, "verify", suite, "--n", "2", "--lambda", "1", "--points", "1", "--self-test")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_verify_is_deterministic(capsys):
    args = ("verify", "lemma43", "--n", "1", "--lambda", "2", "--seed", "7", "--points", "2")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_explicit_point(capsys):
    code, out, _ = run(capsys, "verify", "qkz-numeric", "--n", "2", "--y", "0.9+0.1j,1.2")
    assert code == 0
    pts = {json.dumps(c["parameters"]["point"]) for c in json.loads(out)["reports"][0]["checks"]}
    assert len(pts) == 1


@pytest.mark.parametrize("argv", [
    ("verify", "ybe", "--n", "0"),
    ("verify", "qkz-numeric", "--n", "1", "--q", "1.1"),
    ("verify", "ybe", "--n", "9"),
    ("verify", "nonsense"),
    ("macdonald", "--n", "1", "--lambda", "0"),
    ("macdonald", "--n", "4", "--lambda", "4"),
    ("integral", "--n", "2", "--lambda", "1", "--y", "0.9"),
    ("integral", "--n", "1", "--lambda", "1", "--y", "abc"),
    ("integral", "--n", "1", "--lambda", "1", "--y", "0.9", "--t", "1"),
    ("integral", "--n", "1", "--lambda", "1", "--y", "0.9", "--psi", "phi_7"),
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(cli.main(list(argv)))
    assert exc.value.code == 2


def test_non_convergence_exits_1(capsys):
    code, _, _ = run(capsys, "integral", "--n", "1", "--lambda", "1", "--y", "0.9", "--ladder-trunc", "3")
    assert code == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cnqkz", "macdonald", "--n", "1", "--lambda", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "m_(1,): 1" in res.stdout
