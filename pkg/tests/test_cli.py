import csv
import json
from pathlib import Path

import numpy as np
import pytest

from skewns.cli import BC_COLUMNS, ENERGY_COLUMNS, main

CONFIGS = Path(__file__).resolve().parents[1] / "demos" / "configs"


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_verify_passes(tmp_path):
    assert main(["verify", "--trials", "10", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"]
    assert all(s["worst"] <= 1e-10 for s in report["suites"])


def test_verify_fault_names_suite(capsys):
    assert main(["verify", "--trials", "5", "--inject-fault"]) == 1
    out = capsys.readouterr().out
    assert "FAIL skew_identity" in out
    assert "offending state" in out


def test_verify_zero_trials(capsys):
    assert main(["verify", "--trials", "0"]) == 2
    assert "trials" in capsys.readouterr().err


def test_unknown_subcommand():
    assert main(["frobnicate"]) == 2


@pytest.mark.parametrize("name", ["periodic_inviscid", "bounded_viscous"])
def test_audit_sample_configs(tmp_path, name):
    assert main(["audit", "--config", str(CONFIGS / f"{name}.json"), "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "energy.csv")
    assert list(rows[0]) == ENERGY_COLUMNS
    energies = np.array([float(r["energy"]) for r in rows])
    scale = np.array([max(abs(float(r["rate_measured"])), abs(float(r["surface_inviscid"])),
                          abs(float(r["surface_viscous"])), 1e-300) for r in rows])
    res = np.array([abs(float(r["residual"])) for r in rows])
    assert np.all(res <= 1e-12 * np.maximum(scale, energies))
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"] and report["config"]["nx"] == 33
    assert np.load(tmp_path / "final_state.npy").shape == (4, 33, 33)


def test_config_echo_reruns(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", str(CONFIGS / "bounded_viscous.json"), "--out", str(a)]) == 0
    echo = json.loads((a / "report.json").read_text())["config"]
    cfg = tmp_path / "echo.json"
    cfg.write_text(json.dumps(echo))
    assert main(["run", "--config", str(cfg), "--out", str(b)]) == 0
    assert (a / "energy.csv").read_bytes() == (b / "energy.csv").read_bytes()
    assert np.array_equal(np.load(a / "final_state.npy"), np.load(b / "final_state.npy"))


def test_audit_deterministic(tmp_path):
    cfg = str(CONFIGS / "bounded_viscous.json")
    for d in ("a", "b"):
        assert main(["audit", "--reproducible", "--config", cfg, "--out", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "energy.csv").read_bytes() == (tmp_path / "b" / "energy.csv").read_bytes()


def test_missing_config(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert main(["audit", "--config", str(missing), "--out", str(tmp_path)]) == 2
    assert str(missing) in capsys.readouterr().err


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nx": 9,\n "ny": }')
    assert main(["audit", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "line 2" in capsys.readouterr().err
    bad.write_text('{"nx": 9, "ny": 9, "steps": 1, "viscosity": 1}')
    assert main(["run", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "viscosity" in capsys.readouterr().err
    bad.write_text('{"nx": 2, "ny": 9, "steps": 1}')
    assert main(["run", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_count_bc_default_sweep(tmp_path):
    assert main(["count-bc", "--gamma", "1.4", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "bc_table.csv")
    assert list(rows[0]) == BC_COLUMNS
    assert len(rows) == 10
    for r in rows:
        expected = 3 if r["u_n_sign"] == "1" else 4
        assert int(r["bc_count"]) == int(r["dense_count"]) == expected


def test_count_bc_flags_critical(tmp_path):
    assert main(["count-bc", "--include-critical", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "bc_table.csv")
    flagged = [r for r in rows if r["status"] != "ok"]
    assert len(flagged) == 2
    assert all(r["bc_count"] == "" and r["status"].startswith("degenerate") for r in flagged)
    assert float(flagged[0]["Mn_sq"]) == pytest.approx(0.952381, abs=1e-6)


def test_count_bc_bad_gamma(capsys):
    assert main(["count-bc", "--gamma", "2.5", "--out", "."]) == 2
    assert main(["count-bc", "--mn-sq", "a,b", "--out", "."]) == 2


def test_count_bc_byte_identical(tmp_path):
    for d in ("a", "b"):
        assert main(["count-bc", "--include-critical", "--out", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "bc_table.csv").read_bytes() == (tmp_path / "b" / "bc_table.csv").read_bytes()
