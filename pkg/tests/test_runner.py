import json
import math

import numpy as np
import pytest

from fvcosmo.config import build_scenario
from fvcosmo.errors import PoleError
from fvcosmo.runner import parse_grid_spec, run, sweep, verify_run_dir

from conftest import canonical_mapping

FAST = {
    "integration.t_end": "14.0",
    "integration.dt": "0.002",
    "integration.sample_stride": "20",
}


def fast_scenario(**overrides):
    return build_scenario(canonical_mapping(**FAST, **overrides))


def read_series(path):
    rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
    return {
        "t": np.array([float(r[0]) for r in rows]),
        "H": np.array([float(r[4]) for r in rows]),
        "epsilon": np.array([float(r[6]) for r in rows]),
        "regime": [r[8] for r in rows],
    }


def test_run_writes_expected_outputs(tmp_path):
    manifest = run(fast_scenario(), tmp_path / "out")
    assert manifest.ok
    names = set(manifest.data["outputs"])
    assert names == {
        "vacuum.json", "potential.csv", "series.csv", "potential.svg", "series.svg",
    }
    for name in names | {"manifest.json"}:
        assert (tmp_path / "out" / name).exists()


def test_run_epsilon_anchored_at_planck_time(tmp_path):
    run(fast_scenario(), tmp_path / "out")
    series = read_series(tmp_path / "out" / "series.csv")
    at_tp = np.nonzero(series["t"] >= 1.0)[0][0]
    assert series["t"][at_tp] == 1.0
    assert abs(series["epsilon"][at_tp] - 1.0) < 1e-12


def test_run_is_byte_deterministic(tmp_path):
    run(fast_scenario(), tmp_path / "a")
    run(fast_scenario(), tmp_path / "b")
    for name in ("series.csv", "vacuum.json", "manifest.json", "potential.csv",
                 "potential.svg", "series.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_manifest_contents(tmp_path):
    manifest = run(fast_scenario(), tmp_path / "out").data
    assert manifest["tool"]["name"] == "fvcosmo"
    resolved = manifest["resolved"]
    assert resolved["lambda0_source"] == "calibrated_at_t_p"
    assert resolved["lambda0"] > 0
    assert resolved["alpha"] > 0
    assert resolved["a0_tilde"] == 1.0
    choices = manifest["choices"]
    assert choices["e_coeff"] == pytest.approx(math.e)
    assert choices["force_mode"] == "potential_gradient"
    assert choices["hubble_closure"] == "potential_only"
    diag = manifest["diagnostics"]
    assert diag["gap"] == pytest.approx(0.373, abs=1e-9)
    assert abs(diag["epsilon_at_t_p"] - 1.0) < 1e-12
    assert len(diag["transitions"]) == 2
    assert diag["transitions"][0]["t"] == 1.0
    assert diag["frw_comparison"]["ratio"] > 1e20
    assert diag["dilaton"]["coupling"] == pytest.approx(math.exp(2.0 * math.pi), rel=1e-12)
    # no timestamps or absolute paths anywhere
    text = json.dumps(manifest)
    assert "/tmp" not in text and str(tmp_path) not in text


def test_vacuum_json_matches_module(tmp_path, calibrated_params):
    from fvcosmo.vacuum import vacuum_report

    run(fast_scenario(), tmp_path / "out")
    on_disk = json.loads((tmp_path / "out" / "vacuum.json").read_text())
    rep = vacuum_report(calibrated_params)
    assert on_disk["gap"] == rep.gap
    assert on_disk["phi_T"] == rep.phi_T
    assert on_disk["wall_scale"] == rep.wall_scale


def test_failed_run_records_pole_context(tmp_path):
    scenario = build_scenario(canonical_mapping(**{
        "model.m": "0.01",
        "model.A": "1e6",
        "model.phi0_tilde": "3.2",
        "model.t_p": "0.01",
        "model.delta_t": "0.005",
        "model.r2_span": "50.0",
        "integration.t_end": "5.0",
        "integration.dt": "0.001",
        "integration.phi_dot0": "-4.0",
    }))
    with pytest.raises(PoleError):
        run(scenario, tmp_path / "crash")
    manifest = json.loads((tmp_path / "crash" / "manifest.json").read_text())
    assert manifest["error"]["type"] == "PoleError"
    assert 0.0 < manifest["error"]["t"] < 5.0
    assert manifest["error"]["phi"] == pytest.approx(-0.01, abs=0.01)
    # partial outputs are still inventoried
    assert "vacuum.json" in manifest["outputs"]


def test_verify_run_dir_detects_tampering(tmp_path):
    run(fast_scenario(), tmp_path / "out")
    result = verify_run_dir(tmp_path / "out")
    assert all(state == "ok" for state in result["checks"].values())
    (tmp_path / "out" / "series.csv").write_text("t\n0\n")
    result = verify_run_dir(tmp_path / "out")
    assert result["checks"]["series.csv"] == "mismatch"


def test_parse_grid_spec():
    key, values = parse_grid_spec("model.m=0.1,0.2,0.3")
    assert key == "model.m"
    assert values == ["0.1", "0.2", "0.3"]
    key, values = parse_grid_spec("model.m=0.1:0.2:3")
    assert [float(v) for v in values] == pytest.approx([0.1, 0.15, 0.2])


def test_sweep_runs_grid(tmp_path):
    mapping = canonical_mapping(**FAST)
    summary_path, failed = sweep(
        mapping, ["model.m=0.15,0.1789657612180421,0.2"], tmp_path / "sw", base_name="demo"
    )
    assert failed == 0
    lines = summary_path.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0] == "index,name,model.m,gap,efolds,H_final,epsilon_drift,status"
    for idx in range(3):
        assert (tmp_path / "sw" / f"run-{idx:04d}" / "manifest.json").exists()
    # summary gap equals the per-run vacuum.json value, textually
    for idx, line in enumerate(lines[1:]):
        gap_text = line.split(",")[3]
        vac = json.loads((tmp_path / "sw" / f"run-{idx:04d}" / "vacuum.json").read_text())
        assert gap_text == repr(vac["gap"])


def test_sweep_deterministic_and_parallel_consistent(tmp_path):
    mapping = canonical_mapping(**FAST)
    grid = ["model.m=0.16,0.19"]
    p1, _ = sweep(mapping, grid, tmp_path / "s1", workers=1)
    p2, _ = sweep(mapping, grid, tmp_path / "s2", workers=2)
    assert p1.read_bytes() == p2.read_bytes()
    for idx in range(2):
        a = (tmp_path / "s1" / f"run-{idx:04d}" / "series.csv").read_bytes()
        b = (tmp_path / "s2" / f"run-{idx:04d}" / "series.csv").read_bytes()
        assert a == b


def test_sweep_partial_failure(tmp_path):
    mapping = canonical_mapping(**FAST)
    # m = 0.6 has a single well: the vacuum report fails for that point
    summary_path, failed = sweep(mapping, ["model.m=0.16,0.6"], tmp_path / "sw")
    assert failed == 1
    lines = summary_path.read_text().splitlines()
    assert "error:NoExtremumError" in lines[2]
    assert "ok" in lines[1]
