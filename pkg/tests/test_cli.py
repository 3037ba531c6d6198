import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from rucbound.bounds import two_basis_scenario
from rucbound.cli import main, parse_angle, run_instance
from rucbound.io import dumps_scenario, load_scenario, loads_scenario, ScenarioFileError, dump_state

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
THETA_PI = SCENARIOS / "two_basis_theta_pi.json"
THETA_HALF_PI = SCENARIOS / "two_basis_theta_pi_2.json"
C_PI = 0.5 * (1 + 1 / math.sqrt(2))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_theta_pi(capsys):
    code, out, _ = run(capsys, "bound", str(THETA_PI), "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["id"] == "two-basis-theta-pi"
    assert abs(rec["C"] - C_PI) < 1e-12
    assert rec["nontrivial"] is True


def test_bound_theta_half_pi(capsys):
    code, out, _ = run(capsys, "bound", str(THETA_HALF_PI))
    assert code == 0
    assert "nontrivial: false" in out
    c = float(next(l for l in out.splitlines() if l.startswith("C:")).split(":")[1])
    assert abs(c - 1) < 1e-12


def test_bound_verify(capsys):
    code, out, _ = run(capsys, "bound", str(THETA_PI), "--verify", "--csv")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["discrepancy"]) < 1e-4


def test_files_match_builtin_family():
    for path, theta in ((THETA_PI, math.pi), (THETA_HALF_PI, math.pi / 2)):
        s, _ = load_scenario(path)
        ref = two_basis_scenario(theta)
        assert np.allclose(s.effect_m, ref.effect_m) and np.allclose(s.effect_n, ref.effect_n)
        assert np.allclose(s.meas2.state.matrix, ref.meas2.state.matrix)


def broken(tmp_path, old, new):
    text = THETA_PI.read_text()
    assert old in text
    p = tmp_path / "bad.json"
    p.write_text(text.replace(old, new, 1))
    return p


def test_incomplete_povm_rejected(tmp_path, capsys):
    # m1 becomes 0.5 |1><1|: still a valid effect, but the POVM no longer sums to I
    text = THETA_PI.read_text()
    d = json.loads(text)
    d["meas1"]["povm"][1]["effect"][1][1] = [0.5, 0.0]
    p = tmp_path / "incomplete.json"
    p.write_text(json.dumps(d, indent=2))
    code, _, err = run(capsys, "bound", str(p))
    assert code == 1
    assert "POVM completeness violated" in err
    assert "meas1.povm" in err


def test_diagnostics_carry_line_numbers(tmp_path, capsys):
    p = broken(tmp_path, '"r": 0.5,', '"r": 0.5,\n  "extra": 1,')
    code, _, err = run(capsys, "bound", str(p))
    assert code == 1 and f"{p}:5:" in err
    p = broken(tmp_path, '"subsetN": ["n0"]', '"subsetN": ["nx"]')
    code, _, err = run(capsys, "bound", str(p))
    assert code == 1 and "subsetN.0" in err and "unknown outcome" in err
    p = tmp_path / "trunc.json"
    p.write_text(THETA_PI.read_text()[:200])
    code, _, err = run(capsys, "bound", str(p))
    assert code == 1 and "parse error" in err
    code, _, err = run(capsys, "bound", str(tmp_path / "missing.json"))
    assert code == 1


def test_loads_scenario_error_object():
    with pytest.raises(ScenarioFileError) as exc:
        loads_scenario('{"schema": "1"}', "x.json")
    assert exc.value.filename == "x.json"


def test_scenario_round_trip_is_bit_identical(tmp_path, rng):
    from rucbound.bounds import sample_scenario
    for path in (THETA_PI, THETA_HALF_PI):
        s, ident = load_scenario(path)
        assert dumps_scenario(s, ident) == path.read_text()
    for _ in range(20):
        s = sample_scenario(rng)
        text = dumps_scenario(s, "rand")
        s2, _ = loads_scenario(text)
        assert dumps_scenario(s2, "rand") == text
        assert np.array_equal(s2.effect_m, s.effect_m)
        assert np.array_equal(s2.meas2.state.matrix, s.meas2.state.matrix)


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--steps", "5", "--theta-min", "0", "--theta-max", "pi", "--r", "0.5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["theta"]) for r in rows] == pytest.approx([0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi])
    for r in rows:
        t = float(r["theta"])
        assert abs(float(r["C"]) - (0.5 + 0.5 * math.cos(t / 2 - math.pi / 4))) < 1e-12
    assert abs(float(rows[2]["C"]) - 1) < 1e-12 and rows[2]["nontrivial"] == "false"
    assert abs(float(rows[-1]["C"]) - C_PI) < 1e-12 and rows[-1]["nontrivial"] == "true"
    assert abs(float(rows[0]["C"]) - C_PI) < 1e-12


def test_sweep_usage_errors(capsys):
    assert run(capsys, "sweep", "--steps", "1")[0] == 1
    assert run(capsys, "sweep", "--theta-min", "2", "--theta-max", "1")[0] == 1
    assert run(capsys, "sweep", "--theta-max", "4")[0] == 1


def test_parse_angle():
    assert parse_angle("pi") == math.pi
    assert parse_angle("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_angle("0.25") == 0.25


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--count", "10", "--seed", "7", "--json")
    assert code == 0
    summary = json.loads(out)
    assert summary["passed"]
    assert summary["suites"]["bound"]["max_discrepancy"] <= 1e-4
    code, out, _ = run(capsys, "verify", "--suite", "fef", "--count", "10", "--seed", "7")
    assert code == 0 and out.strip().endswith("PASS")


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "bound", "--count", "2", "--tol", "-1")
    assert code == 2
    assert "replay with" in out


def test_verify_count_zero(capsys):
    assert run(capsys, "verify", "--count", "0")[0] == 1


def test_verify_is_deterministic_and_replayable(capsys):
    first = run(capsys, "verify", "--count", "3", "--seed", "5", "--json")[1]
    second = run(capsys, "verify", "--count", "3", "--seed", "5", "--json")[1]
    assert first == second
    assert run_instance("bound", 5, 2) == run_instance("bound", 5, 2)


def test_fef_builtins(capsys):
    for name, want in (("bell", 1.0), ("mixed", 0.25), ("product:0+", 0.5), ("product:rl", 0.5)):
        code, out, _ = run(capsys, "fef", "--builtin", name, "--json")
        assert code == 0
        vals = json.loads(out)["values"]
        assert all(abs(v - want) < 1e-6 for v in vals.values()), (name, vals)
    code, out, _ = run(capsys, "fef", "--builtin", "product:mm", "--method", "product")
    assert code == 0 and "product: 0.25" in out


def test_fef_state_file(tmp_path, capsys):
    triplet = np.eye(4) / 4
    for p in (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])):
        triplet = triplet + np.kron(p, p) / 12
    path = tmp_path / "triplet.json"
    dump_state(triplet, path)
    code, out, _ = run(capsys, "fef", str(path))
    assert code == 0 and "warning" in out


def test_fef_usage_errors(capsys):
    assert run(capsys, "fef")[0] == 1
    assert run(capsys, "fef", "--builtin", "nope")[0] == 1
    assert run(capsys, "fef", "--builtin", "bell", "--method", "product")[0] == 1


def test_output_file(tmp_path, capsys):
    out = tmp_path / "out.csv"
    assert run(capsys, "sweep", "--out", str(out))[0] == 0
    assert out.read_text().startswith("theta,C,T,nontrivial")


def test_argparse_errors_exit_one(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "--help")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rucbound", "bound", str(THETA_PI)], capture_output=True, text=True)
    assert proc.returncode == 0 and "C: 0.853553" in proc.stdout
