import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from hlpos.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(out):
    lines = [line for line in out.splitlines() if not line.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


@pytest.fixture
def tensor_file(tmp_path):
    def make(arr):
        arr = np.asarray(arr, dtype=float)
        path = tmp_path / "t.json"
        path.write_text(json.dumps({"shape": list(arr.shape), "data": arr.ravel().tolist()}))
        return str(path)

    return make


def test_delta(capsys):
    code, out, _ = run(capsys, "delta", "--p", "4,4")
    assert code == 0
    assert out.splitlines()[0].startswith("# config: ")
    assert out.splitlines()[-1] == "2"


def test_admissible(capsys):
    code, out, _ = run(capsys, "admissible", "--p", "4,4", "--sigma", "1,2", "--q", "2,1")
    assert code == 0
    assert out.splitlines()[-1] == "false (k=2)"


def test_falsify_csv(capsys):
    code, out, _ = run(capsys, "falsify", "--p", "2,2", "--q", "10,2", "--n", "1024")
    assert code == 0
    rows = table(out)
    assert rows[0] == ["n", "lhs", "norm", "ratio", "k"]
    assert float(rows[1][3]) == pytest.approx(2.0, rel=1e-9)


def test_critical_json(capsys):
    code, out, _ = run(capsys, "critical", "--p", "4,4,4", "--format", "json")
    doc = json.loads(out)
    assert doc["result"]["q"] == [4, 2, "4/3"]
    assert doc["config"]["sigma"] == [1, 2, 3]


def test_mixed_norm_and_opnorm(capsys, tensor_file):
    path = tensor_file(np.eye(3))
    code, out, _ = run(capsys, "mixed-norm", "--tensor", path, "--q", "inf,1")
    assert float(table(out)[1][0]) == 1.0
    code, out, _ = run(capsys, "opnorm", "--tensor", path, "--p", "4,4", "--format", "json")
    doc = json.loads(out)
    assert doc["result"]["value"] == pytest.approx(3**0.5, rel=1e-8)
    assert doc["result"]["kind"] == "lower_bound"
    code, out, _ = run(capsys, "opnorm", "--tensor", path, "--p", "4,4", "--method", "grid", "--resolution", "30")
    assert float(table(out)[1][0]) == pytest.approx(3**0.5, rel=1e-9)


def test_reduce(capsys, tensor_file, tmp_path):
    path = tensor_file(np.ones((2, 2)))
    out_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "reduce", "--tensor", path, "--p", "4,4", "--output", str(out_path), "--format", "json")
    doc = json.loads(out)
    assert doc["result"]["r"] == [3]
    assert json.loads(out_path.read_text())["shape"] == [2]


def test_sharpness_and_bayart(capsys):
    code, out, _ = run(capsys, "sharpness", "--p", "4,4", "--n", "1,10,100")
    assert [float(r[3]) for r in table(out)[1:]] == pytest.approx([1, 1, 1], abs=1e-12)
    code, out, _ = run(capsys, "bayart", "--p", "4,4,4", "--rho", "3.99")
    assert out.splitlines()[-1] == "false"


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--p", "4,4", "--q", "2,4/3", "--trials", "4")
    assert code == 0
    assert "# summary:" in out
    code, _, err = run(capsys, "verify", "--p", "4,4", "--q", "2,1", "--trials", "4")
    assert code == 2 and "--q" in err


def test_verify_exit_3_on_violation(capsys, monkeypatch):
    from hlpos import harness

    def fake_check(a, p, sigma, q, seed, *rest):
        return harness.TrialRecord(seed, a.shape, 2.0, 1.0, harness.VIOLATED, True, 8)

    monkeypatch.setattr(harness, "check_tensor", fake_check)
    code, out, _ = run(capsys, "verify", "--p", "4,4", "--q", "2,4/3", "--trials", "2")
    assert code == 3


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["admissible", "--p", "4,4", "--q", "2"], "--q"),
        (["admissible", "--p", "4,4", "--sigma", "1,1", "--q", "2,2"], "--sigma"),
        (["falsify", "--p", "4,4", "--q", "2,2", "--n", "4"], "--q"),
        (["sharpness", "--p", "2,2", "--n", "4"], "--p"),
        (["delta", "--p", "1/2"], "--p"),
    ],
)
def test_validation_errors(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert flag in err
    assert len(err.strip().splitlines()) == 1


def test_parse_error_single_line(capsys):
    with pytest.raises(SystemExit) as info:
        main(["delta", "--p", "4,abc"])
    assert info.value.code == 2
    err = capsys.readouterr().err
    assert "--p" in err and len(err.strip().splitlines()) == 1


def test_malformed_tensor(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"shape": [2, 2], "data": [1, 2, -3, 4]}))
    code, _, err = run(capsys, "mixed-norm", "--tensor", str(path), "--q", "1,1")
    assert code == 2 and "--tensor" in err and "data[2]" in err


def test_json_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps({"a": [1, 2.5, "inf", True]}) == '{"a": [1, 2.5, "inf", true]}'
    assert float(dumps(1 / 3)) == 1 / 3


def test_seed_env_and_reproducible(monkeypatch):
    argv = [sys.executable, "-m", "hlpos", "verify", "--p", "3,3,3", "--q", "inf,3,3/2", "--trials", "6", "--format", "json"]
    env = {"HL_SEED": "42", "PATH": ""}
    first = subprocess.run(argv, capture_output=True, text=True, env=env, check=True).stdout
    second = subprocess.run(argv + ["--workers", "3"], capture_output=True, text=True, env=env, check=True).stdout
    doc1, doc2 = json.loads(first), json.loads(second)
    assert doc1["config"]["seed"] == 42
    assert doc1["result"] == doc2["result"]
    third = subprocess.run(argv, capture_output=True, text=True, env=env, check=True).stdout
    assert first == third
