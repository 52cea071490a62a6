import json
import math
import subprocess
import sys

import pytest

from hsslab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_json(capsys):
    code, out, _ = run(capsys, "invariants", "I", "2", "2")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1
    assert {k: doc["result"][k] for k in ("r", "a", "b", "genus", "n")} == {"r": 2, "a": 2, "b": 0, "genus": 4, "n": 4}
    assert doc["config"]["domain"] == "I 2 2" and doc["config"]["seed"] == 20240601


def test_invariants_disc(capsys):
    code, out, _ = run(capsys, "invariants", "disc")
    assert json.loads(out)["result"]["genus"] == 2


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "invariants", "I", "0", "2")
    assert code == 2 and "p >= q >= 1" in err


def test_bounds_equality(capsys):
    code, out, _ = run(capsys, "bounds", "ball", "2")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["lambda1_lower"] == pytest.approx(4) and res["lambda1_upper_entv"] == pytest.approx(4)
    assert res["equality"] and res["sources"]["lambda1_lower"]


def test_bounds_radius(capsys):
    code, out, _ = run(capsys, "bounds", "disc", "--radius", "1")
    res = json.loads(out)["result"]
    assert res["lambda1_lower"] == pytest.approx(1 / math.tanh(1) ** 2)
    assert res["lambda1_lower"] == pytest.approx(1.7240, abs=1e-4)
    assert json.loads(out)["config"]["radius"] == 1.0


def test_bounds_certify_deterministic(capsys):
    code, first, _ = run(capsys, "bounds", "I", "2", "2", "--certify", "--seed", "7", "--tol", "barta_fd=0.02")
    _, second, _ = run(capsys, "bounds", "I", "2", "2", "--certify", "--seed", "7", "--tol", "barta_fd=0.02")
    assert code == 0 and first == second
    res = json.loads(first)["result"]
    assert res["barta_margin"] is not None and res["rayleigh_estimate"] is not None
    assert json.loads(first)["config"]["tolerances"]["barta_fd"] == 0.02


def test_bounds_negative_radius(capsys):
    code, _, _ = run(capsys, "bounds", "disc", "--radius", "-1")
    assert code == 2


def test_entropy_formula(capsys):
    code, out, _ = run(capsys, "entropy", "I", "2", "2", "--method", "formula")
    vals = {r["quantity"]: r["value"] for r in json.loads(out)["result"]}
    assert vals == pytest.approx({"diastatic": 3, "volume": 2 * math.sqrt(10)})


def test_entropy_scan(capsys):
    code, out, _ = run(capsys, "entropy", "disc", "--method", "scan")
    (res,) = json.loads(out)["result"]
    assert code == 0 and abs(res["value"] - 1) <= 0.05 and res["error_bar"] == pytest.approx(0.05)


def test_entropy_refusal(capsys):
    code, out, _ = run(capsys, "entropy", "III", "3", "--method", "growth")
    doc = json.loads(out)
    assert code == 3 and doc["status"] == "error"
    assert "formula-only for rank >= 3" in doc["error"]["message"]


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2
    assert "algebra" in capsys.readouterr().err


def test_unknown_tolerance(capsys):
    code, _, err = run(capsys, "invariants", "disc", "--tol", "nonsense=1")
    assert code == 2 and "valid names" in err


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "entropy", "--tol", "growth_rel=1e-9")
    assert code == 1
    assert any(not r["passed"] for r in json.loads(out)["result"])


def test_csv_and_pretty(capsys, tmp_path):
    path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "entropy", "disc", "--format", "csv", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and out == "" and lines[0].split(",")[0] == "domain" and len(lines) == 3
    code, out, _ = run(capsys, "invariants", "disc", "--format", "pretty")
    assert "genus" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hsslab", "invariants", "ball", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["b"] == 2


@pytest.mark.parametrize("seed", ["1", "2"])
def test_verify_all_seed_robust(capsys, seed):
    code, out, _ = run(capsys, "verify", "all", "--seed", seed)
    failed = [r["name"] for r in json.loads(out)["result"] if not r["passed"]]
    assert code == 0, failed
