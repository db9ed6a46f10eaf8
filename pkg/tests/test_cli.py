import json
import subprocess
import sys

import pytest

from catalan_incidence.cli import main
from catalan_incidence.iso import RingMatrix, phi_matrix
from catalan_incidence.rings import INTEGERS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compose(capsys):
    code, out, _ = run(capsys, "compose", "--n", "3", "--f", "2,2,3", "--g", "2,3,3")
    assert code == 0
    assert json.loads(out) == [2, 3, 3]


def test_compose_text(capsys):
    code, out, _ = run(capsys, "compose", "--n", "3", "--f", "2,3,3", "--g", "2,3,3", "--format", "text")
    assert code == 0 and out.strip() == "[3,3,3]"


@pytest.mark.parametrize(
    "argv",
    [
        ["compose", "--n", "3", "--f", "2,1,3", "--g", "2,3,3"],
        ["compose", "--n", "4", "--f", "2,2,3", "--g", "2,3,3"],
        ["compose", "--n", "3", "--f", "x", "--g", "2,3,3"],
        ["phi-inv", "--n", "3", "--pair", "{2}<{1}"],
        ["phi", "--n", "3", "--f", "1,2,3", "--ring", "Z/1"],
        ["enumerate", "--n", "0"],
        ["bogus"],
        ["verify"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3")
    assert code == 0
    assert json.loads(out) == [[1, 2, 3], [1, 3, 3], [2, 2, 3], [2, 3, 3], [3, 3, 3]]
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--pairs")
    assert json.loads(out)[2] == {"X": [1], "Y": [2]}
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--pairs", "--format", "text")
    assert out.splitlines() == ["{}<{}", "{1}<{1}", "{1}<{2}", "{2}<{2}", "{1,2}<{1,2}"]


def test_enumerate_bound_exit_3(capsys, monkeypatch):
    monkeypatch.delenv("CATALAN_MAX_N", raising=False)
    code, _, err = run(capsys, "enumerate", "--n", "13")
    assert code == 3 and "bound" in err


def test_env_overrides_bound(capsys, monkeypatch):
    monkeypatch.setenv("CATALAN_MAX_N", "3")
    assert run(capsys, "enumerate", "--n", "4")[0] == 3
    assert run(capsys, "matrix", "--n", "4", "--out", "/dev/null")[0] == 3
    monkeypatch.setenv("CATALAN_MAX_N", "13")
    assert run(capsys, "enumerate", "--n", "13", "--format", "text")[0] == 0


def test_phi(capsys):
    code, out, _ = run(capsys, "phi", "--n", "3", "--f", "2,2,3")
    assert code == 0
    data = json.loads(out)
    assert data["basis"] == "pairs" and data["ring"] == "Z"
    assert [t["key"] for t in data["terms"]] == [{"X": [], "Y": []}, {"X": [1], "Y": [2]}, {"X": [2], "Y": [2]}]


def test_phi_inv(capsys):
    code, out, _ = run(capsys, "phi-inv", "--n", "3", "--pair", "{1}<{2}")
    assert code == 0
    data = json.loads(out)
    assert data["terms"] == [{"key": [2, 3, 3], "coeff": "1"}, {"key": [3, 3, 3], "coeff": "-1"}]
    code, out, _ = run(capsys, "phi-inv", "--n", "3", "--pair", "{1}<{2}", "--ring", "Z/4")
    assert json.loads(out)["terms"][1]["coeff"] == "3"


def test_matrix(capsys, tmp_path):
    out_file = tmp_path / "m.csv"
    code, _, _ = run(capsys, "matrix", "--n", "3", "--ring", "Z", "--out", str(out_file))
    assert code == 0
    assert RingMatrix.from_csv(INTEGERS, out_file.read_text(), 2) == phi_matrix(2)
    inv_file = tmp_path / "inv.csv"
    run(capsys, "matrix", "--n", "3", "--out", str(inv_file), "--inverse")
    N = RingMatrix.from_csv(INTEGERS, inv_file.read_text(), 2)
    assert phi_matrix(2) @ N == RingMatrix.identity(INTEGERS, 5)


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--n", "4", "--ring", "Z/4")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_randomized(capsys):
    code, out, _ = run(capsys, "verify", "--n", "8", "--ring", "Z", "--seed", "2", "--samples", "100")
    data = json.loads(out)
    assert code == 0 and data["mode"] == "randomized" and data["samples"] == 100


def test_verify_exhaustive_bound_exit_3(capsys):
    assert run(capsys, "verify", "--n", "8")[0] == 3


def test_verify_failure_and_replay(capsys, tmp_path):
    code, out, err = run(capsys, "verify", "--n", "3", "--mutate", "flip-incidence")
    assert code == 1
    report = json.loads(out)
    assert report["pass"] is False
    theorem = next(c for c in report["checks"] if c["name"] == "theorem_homomorphism")
    ce = theorem["counterexample"]
    assert json.dumps(ce) in err.splitlines()
    code, out, _ = run(capsys, "verify", "--replay", json.dumps(ce), "--mutate", "flip-incidence")
    assert code == 1 and json.loads(out)["pass"] is False
    path = tmp_path / "ce.json"
    path.write_text(json.dumps(ce))
    assert run(capsys, "verify", "--replay", str(path))[0] == 0


def test_console_script_module_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "catalan_incidence.cli", "compose", "--n", "3", "--f", "2,2,3", "--g", "2,3,3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == [2, 3, 3]
