"""
The blendflow commands. Each returns a process exit status.
"""
import logging
import os

from ..diagnostics.bounds import certify_envelope, running_bounds
from ..driftflux.compare import compare_models
from ..oracles.stationary import stationary_profile
from ..solver.run import run
from ..utils.errors import (ConfigError, DomainError, NonconvergenceError, RangeError,
                            SolverError, SonicError)
from . import export
from .scenario import ScenarioFile

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_NO_CERTIFICATE = 4
EXIT_SONIC = 5

CONFIG_ERRORS = (ConfigError, DomainError, RangeError, KeyError, ValueError)


def _load(scenario_path, snapshot_times=None):
    return ScenarioFile.load(scenario_path).to_scenario(snapshot_times)


def cmd_run(scenario_path, out_dir, snapshot_times=None):
    """
    Run a scenario; write frames.csv, bounds.json and snapshots/.
    """
    try:
        scenario = _load(scenario_path, snapshot_times)
    except SonicError as e:
        logger.error(f"Sonic initial profile: {e}")
        return EXIT_SONIC
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error in {scenario_path}: {e}")
        return EXIT_CONFIG
    try:
        trajectory = run(scenario)
    except SolverError as e:
        logger.error(f"Solver error: {e}")
        return EXIT_SOLVER

    bounds = running_bounds(trajectory, scenario.params)
    export.write_frames_csv(os.path.join(out_dir, "frames.csv"), trajectory.frames)
    export.write_json(os.path.join(out_dir, "bounds.json"), bounds.to_dict())
    for t, state in sorted(trajectory.snapshots.items()):
        export.write_state_csv(os.path.join(out_dir, "snapshots", f"state_t{t:.6g}.csv"), state)
    print(f"{scenario.name}: {len(trajectory.frames)} frames, terminal L^e = "
          f"{trajectory.frames[-1].lyap:.6e}, beta = {bounds.beta:.6g}")
    return EXIT_OK


def cmd_certify(frames_path, bounds_path, t_star=None, rel_tol=0.05, out_dir=None):
    """
    Certify the synchronization envelope from the files written by cmd_run.
    """
    try:
        columns = export.read_frames_csv(frames_path)
        times, lyap, bhat, integral, bl = (columns[k] for k in ("t", "lyap", "Bhat", "I", "BL"))
        bounds = export.read_json(bounds_path)
        beta = float(bounds["beta"])
        m, n, omega_bar = float(bounds["M"]), float(bounds["N"]), float(bounds["omega_bar"])
        eps_hat = float(bounds["eps_hat"])
    except (OSError, KeyError, ValueError, TypeError) as e:
        logger.error(f"Cannot read certification inputs: {e}")
        return EXIT_CONFIG
    if beta <= 0:
        print(f"FAIL: beta = {beta:.6g} <= 0, certification impossible "
              f"(M = {m:.6g}, N = {n:.6g}, Omega_bar = {omega_bar:.6g})")
        return EXIT_NO_CERTIFICATE

    report = certify_envelope(times, lyap, beta, eps_hat, t_star=t_star, bhat=bhat, integral=integral, bl=bl,
                              rel_tol=rel_tol)
    print(f"envelope (i): {'PASS' if report.envelope_passed else 'FAIL'}")
    if t_star is not None:
        print(f"hypothesis Bhat <= I on [t*, T]: {'yes' if report.hypothesis_bhat_le_I else 'no'}")
        print(f"hypothesis I >= B_L on [t*, T]: {'yes' if report.hypothesis_I_ge_BL else 'no'}")
        print(f"decay (ii): {'PASS' if report.decay_passed else 'FAIL'}")
    out_dir = out_dir or os.path.dirname(os.path.abspath(frames_path))
    export.write_json(os.path.join(out_dir, "cert.json"), report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_compare(scenario_path, out_dir, omega_bar=None):
    try:
        scenario = _load(scenario_path)
    except SonicError as e:
        logger.error(f"Sonic initial profile: {e}")
        return EXIT_SONIC
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error in {scenario_path}: {e}")
        return EXIT_CONFIG
    try:
        report = compare_models(scenario, omega_bar)
    except SolverError as e:
        logger.error(f"Solver error: {e}")
        return EXIT_SOLVER
    export.write_compare_csv(os.path.join(out_dir, "compare.csv"), report.rows)
    s0 = report.bounds.S0
    print(f"omega_bar = {report.omega_bar:.6g}: terminal L^e = {report.terminal_lyapunov:.6e}, "
          f"S0 = {'undefined' if s0 is None else format(s0, '.6e')}, "
          f"max field distance = {report.max_field_distance:.6e}")
    return EXIT_OK


def cmd_stationary(scenario_path, out_dir, shoot=False):
    try:
        scenario_file = ScenarioFile.load(scenario_path)
        spec = scenario_file.stationary_spec(shoot=shoot)
        state = stationary_profile(spec, scenario_file.length, scenario_file.discretization().cells)
    except SonicError as e:
        logger.error(f"Stationary profile is not subsonic: {e}")
        return EXIT_SONIC
    except NonconvergenceError as e:
        logger.error(f"Stationary computation failed: {e}")
        return EXIT_SOLVER
    except CONFIG_ERRORS as e:
        logger.error(f"Configuration error in {scenario_path}: {e}")
        return EXIT_CONFIG
    export.write_state_csv(os.path.join(out_dir, "stationary.csv"), state)
    print(f"stationary profile: flow rates {list(spec.q_tilde)}, "
          f"outlet densities {[float(r) for r in state.rho[:, -1]]}")
    return EXIT_OK
