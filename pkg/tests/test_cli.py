import csv
import json
import pathlib

import numpy as np
import pytest

from conftest import sync_toml
from src.cli.commands import (EXIT_CONFIG, EXIT_NO_CERTIFICATE, EXIT_OK, EXIT_SOLVER, EXIT_SONIC,
                              cmd_certify, cmd_compare, cmd_run, cmd_stationary)
from src.cli.export import read_frames_csv
from src.cli.scenario import ScenarioFile
from src.gas.laws import PressureLaw
from src.main import main
from src.mixture.state import PhysicsParams
from src.oracles.stationary import StationarySpec, stationary_profile, stationary_solution

STATIONARY_TOML = """
name = "stationary"

[physics]
theta_per_m = 0.1
omega_bar_per_s = 5.0

[geometry]
length_m = 1.0

[grid]
cells = 16
cfl = 0.9

[horizon]
t_end_s = 0.1

[[components]]
law = "isothermal"
sound_speed_m_per_s = 1.0

[[components]]
law = "isothermal"
sound_speed_m_per_s = 2.0

[initial]
family = "stationary"

[boundary]
kind = "analytic"

[stationary]
{body}
"""


def write(tmp_path, text, name="scenario.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_run_writes_frames_and_bounds(tmp_path):
    path = write(tmp_path, sync_toml(cells=32, t_end=0.25))
    assert cmd_run(path, str(tmp_path / "out")) == EXIT_OK
    columns = read_frames_csv(tmp_path / "out" / "frames.csv")
    assert columns["t"][0] == 0.0
    assert columns["t"][-1] == 0.25
    assert "rho_left_1" in columns
    bounds = json.loads((tmp_path / "out" / "bounds.json").read_text())
    assert bounds["omega_bar"] == 20.0
    assert bounds["beta_positive"] is True
    assert bounds["beta"] == pytest.approx(20.0 - bounds["M"] - bounds["N"])


def test_runs_are_deterministic(tmp_path):
    path = write(tmp_path, sync_toml(cells=32, t_end=0.25))
    cmd_run(path, str(tmp_path / "a"))
    cmd_run(path, str(tmp_path / "b"))
    assert (tmp_path / "a" / "frames.csv").read_bytes() == (tmp_path / "b" / "frames.csv").read_bytes()


def test_zero_horizon_writes_single_frame(tmp_path):
    path = write(tmp_path, sync_toml(cells=32, t_end=0.0))
    assert cmd_run(path, str(tmp_path)) == EXIT_OK
    rows = read_rows(tmp_path / "frames.csv")
    assert len(rows) == 1
    assert float(rows[0]["t"]) == 0.0


def test_snapshots_are_written(tmp_path):
    path = write(tmp_path, sync_toml(cells=32, t_end=0.5))
    assert cmd_run(path, str(tmp_path), snapshot_times=[0.25, 0.5]) == EXIT_OK
    rows = read_rows(tmp_path / "snapshots" / "state_t0.25.csv")
    assert len(rows) == 32
    assert set(rows[0]) == {"x", "rho_0", "v_0", "rho_1", "v_1"}
    assert (tmp_path / "snapshots" / "state_t0.5.csv").exists()


@pytest.mark.slow
def test_certify_synchronizing_run(tmp_path):
    path = write(tmp_path, sync_toml())
    assert cmd_run(path, str(tmp_path)) == EXIT_OK
    status = cmd_certify(str(tmp_path / "frames.csv"), str(tmp_path / "bounds.json"))
    assert status == EXIT_OK
    cert = json.loads((tmp_path / "cert.json").read_text())
    assert cert["envelope_passed"] is True
    assert cert["passed"] is True


def test_certify_weak_coupling_has_no_certificate(tmp_path, capsys):
    path = write(tmp_path, sync_toml(omega_bar=0.01, cells=32, t_end=0.25))
    assert cmd_run(path, str(tmp_path)) == EXIT_OK
    bounds = json.loads((tmp_path / "bounds.json").read_text())
    assert bounds["beta_positive"] is False
    assert bounds["S0"] is None
    status = cmd_certify(str(tmp_path / "frames.csv"), str(tmp_path / "bounds.json"))
    assert status == EXIT_NO_CERTIFICATE
    assert "FAIL" in capsys.readouterr().out


def test_certify_missing_inputs(tmp_path):
    assert cmd_certify(str(tmp_path / "nope.csv"), str(tmp_path / "nope.json")) == EXIT_CONFIG


def test_missing_section_is_config_error(tmp_path):
    text = sync_toml(cells=32, t_end=0.1).replace("[physics]", "[physic]")
    assert cmd_run(write(tmp_path, text), str(tmp_path)) == EXIT_CONFIG
    assert not (tmp_path / "frames.csv").exists()


def test_unknown_family_is_config_error(tmp_path):
    text = sync_toml(cells=32, t_end=0.1).replace('family = "uniform"', 'family = "vortex"')
    assert cmd_run(write(tmp_path, text), str(tmp_path)) == EXIT_CONFIG


def test_supersonic_inflow_is_solver_error(tmp_path):
    text = (sync_toml(cells=32, t_end=0.1)
            .replace("velocity_m_per_s = [0.2, 0.4]", "velocity_m_per_s = [2.0, 2.0]")
            .replace("value = 0.3", "value = 2.0"))
    assert cmd_run(write(tmp_path, text), str(tmp_path)) == EXIT_SOLVER


def test_compare_writes_table(tmp_path, capsys):
    path = write(tmp_path, sync_toml(cells=32, t_end=0.25))
    assert cmd_compare(path, str(tmp_path), omega_bar=40.0) == EXIT_OK
    rows = read_rows(tmp_path / "compare.csv")
    assert list(rows[0]) == ["t", "lyap_full", "S0", "field_distance"]
    assert float(rows[-1]["t"]) == 0.25
    assert "omega_bar = 40" in capsys.readouterr().out


def test_stationary_zero_flow_is_constant(tmp_path):
    body = "flow_rates_kg_per_m2_s = [0.0, 0.0]\ninlet_density_kg_per_m3 = [1.0, 2.0]"
    assert cmd_stationary(write(tmp_path, STATIONARY_TOML.format(body=body)), str(tmp_path)) == EXIT_OK
    rows = read_rows(tmp_path / "stationary.csv")
    assert len(rows) == 16
    np.testing.assert_allclose([float(r["rho_0"]) for r in rows], 1.0, rtol=1e-12)
    np.testing.assert_allclose([float(r["rho_1"]) for r in rows], 2.0, rtol=1e-12)
    assert all(float(r["v_0"]) == 0.0 for r in rows)


def test_stationary_supersonic_inlet_is_sonic(tmp_path):
    body = "flow_rates_kg_per_m2_s = [3.0, 3.0]\ninlet_velocity_m_per_s = 3.0"
    assert cmd_stationary(write(tmp_path, STATIONARY_TOML.format(body=body)), str(tmp_path)) == EXIT_SONIC


def test_stationary_shooting_matches_outlet(tmp_path):
    laws = (PressureLaw.isothermal(1.0), PressureLaw.isothermal(2.0))
    params = PhysicsParams(theta=0.1, omega_bar=5.0)
    true = StationarySpec.from_inlet_velocity((0.2, 0.4), 0.2, params, laws)
    outlet = stationary_solution(true, 1.0).y[:, -1]
    body = (f"inlet_velocity_m_per_s = 0.2\n"
            f"outlet_density_kg_per_m3 = [{float(outlet[0])!r}, {float(outlet[1])!r}]")
    path = write(tmp_path, STATIONARY_TOML.format(body=body))
    assert cmd_stationary(path, str(tmp_path), shoot=True) == EXIT_OK
    rows = read_rows(tmp_path / "stationary.csv")
    expected = stationary_profile(true, 1.0, 16)
    np.testing.assert_allclose([float(r["rho_0"]) for r in rows], expected.rho[0], atol=1e-5)
    np.testing.assert_allclose([float(r["rho_1"]) for r in rows], expected.rho[1], atol=1e-5)


def test_stationary_shooting_needs_outlet(tmp_path):
    body = "inlet_velocity_m_per_s = 0.2"
    path = write(tmp_path, STATIONARY_TOML.format(body=body))
    assert cmd_stationary(path, str(tmp_path), shoot=True) == EXIT_CONFIG


def test_scenario_file_round_trip():
    scenario_file = ScenarioFile.loads(sync_toml())
    again = ScenarioFile.loads(scenario_file.dumps())
    assert again.to_dict() == scenario_file.to_dict()
    assert again.name == "sync"
    assert len(again.to_scenario().bc.rhobar) == 2


def test_perturbation_keeps_barycentric_velocity():
    text = sync_toml(cells=8).replace(
        "velocity_m_per_s = [0.2, 0.4]",
        "velocity_m_per_s = [0.3, 0.3]\nperturbation = { amplitude_m_per_s = 0.1, seed = 7 }")
    state = ScenarioFile.loads(text).initial_state()
    np.testing.assert_allclose((state.rho * state.v).sum(axis=0) / state.rho.sum(axis=0), 0.3)
    assert np.all(np.abs(state.v - 0.3) <= 0.2)
    assert not np.allclose(state.v[0], state.v[1])


def test_main_runs_scenario(tmp_path):
    path = write(tmp_path, sync_toml(cells=16, t_end=0.1))
    assert main(["run", path, "--out", str(tmp_path), "--snapshots", "0.05"]) == EXIT_OK
    assert (tmp_path / "frames.csv").exists()
    assert (tmp_path / "snapshots" / "state_t0.05.csv").exists()


SCENARIO_DIR = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


@pytest.mark.parametrize("path", sorted(SCENARIO_DIR.glob("*.toml")), ids=lambda p: p.stem)
def test_shipped_scenarios_load(path):
    scenario = ScenarioFile.load(path).to_scenario()
    assert scenario.name == path.stem
    assert scenario.disc.cells == scenario.initial.cells


TABLE_TOML = """
name = "table"

[physics]
theta_per_m = 0.0
omega_bar_per_s = 1.0

[geometry]
length_m = 1.0

[grid]
cells = 16
cfl = 0.9

[horizon]
t_end_s = 1.0

[[components]]
law = "tabulated"
density_kg_per_m3 = [0.5, 1.0, 1.5, 2.0]
pressure_pa = [0.25, 1.0, 2.25, 4.0]

[initial]
family = "uniform"
density_kg_per_m3 = [1.8]
velocity_m_per_s = [0.0]

[boundary]
velocity = { kind = "constant", value = 0.8 }
density = [{ kind = "constant", value = 1.8 }]
"""


def test_run_leaving_table_is_solver_error(tmp_path):
    assert cmd_run(write(tmp_path, TABLE_TOML), str(tmp_path)) == EXIT_SOLVER
    assert not (tmp_path / "frames.csv").exists()


def test_compare_leaving_table_is_solver_error(tmp_path):
    assert cmd_compare(write(tmp_path, TABLE_TOML), str(tmp_path)) == EXIT_SOLVER


@pytest.mark.parametrize("text", ['{"beta": 1.0}', '[1.0, 2.0]', '{"beta": "x", "M": 0, "N": 0}'],
                         ids=["missing-keys", "not-a-table", "not-a-number"])
def test_certify_malformed_bounds_is_config_error(tmp_path, text):
    path = write(tmp_path, sync_toml(cells=16, t_end=0.1))
    assert cmd_run(path, str(tmp_path)) == EXIT_OK
    (tmp_path / "bounds.json").write_text(text)
    assert cmd_certify(str(tmp_path / "frames.csv"), str(tmp_path / "bounds.json")) == EXIT_CONFIG
