"""
Full model against drift-flux reduction on the same scenario.
"""
import dataclasses
import logging

import numpy as np

from ..diagnostics.bounds import running_bounds
from ..diagnostics.energy import frame, lyapunov
from ..solver.boundary import check_c1_compatibility
from ..solver.run import Trajectory, step_failures
from ..solver.scheme import cfl_dt, step_riemann
from .model import DriftFluxState, driftflux_cfl_dt, driftflux_step

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ComparisonRow:
    t: float
    lyap_full: float
    S0: float | None
    field_distance: float


@dataclasses.dataclass
class ComparisonReport:
    rows: list
    omega_bar: float
    bounds: object
    full: Trajectory
    final_driftflux: DriftFluxState

    @property
    def terminal_lyapunov(self):
        return self.rows[-1].lyap_full

    @property
    def max_field_distance(self):
        return max(r.field_distance for r in self.rows)


def field_distance(full, drift):
    """
    L² distance of densities and component momenta, the drift-flux momentum
    of component i being ρ^i v.
    """
    d_rho = full.rho - drift.rho
    d_q = full.rho * full.v - drift.rho * drift.v[None, :]
    return float(np.sqrt(full.dx * np.sum(d_rho ** 2 + d_q ** 2)))


def compare_models(scenario, omega_bar=None):
    """
    Advance both models in lockstep with the smaller of the two CFL steps.
    The full model starts from the scenario's velocities, the drift-flux model
    from their barycentric average. Reports L^e of the full model, S₀ of the
    full run and the field distance; asserts nothing.
    """
    if omega_bar is not None:
        scenario = scenario.with_omega_bar(omega_bar)
    params, disc, bc = scenario.params, scenario.disc, scenario.bc
    full = scenario.initial
    with step_failures(scenario.name, 0.0):
        field = full.to_riemann()
        drift = DriftFluxState.from_mixture(full)
        frames = [frame(full, params, 0.0)]
    report = check_c1_compatibility(full, bc, params)
    logger.info(f"Comparing models for '{scenario.name}' with omega_bar={params.omega_bar}")

    samples = [(0.0, lyapunov(full), field_distance(full, drift))]
    t = 0.0
    steps = 0
    while t < disc.t_end:
        with step_failures(scenario.name, t):
            dt = min(cfl_dt(full, disc), driftflux_cfl_dt(drift, disc))
            landing = t + dt >= disc.t_end
            if landing:
                dt = disc.t_end - t
            field = step_riemann(field, bc, params, disc, t, dt)
            full = field.to_state()
            drift = driftflux_step(drift, bc, params, disc, t, dt)
        t = disc.t_end if landing else t + dt
        steps += 1
        if steps % disc.output_stride == 0 or landing:
            with step_failures(scenario.name, t):
                frames.append(frame(full, params, t))
            samples.append((t, frames[-1].lyap, field_distance(full, drift)))

    trajectory = Trajectory(frames=frames, length=full.length, compatibility=report,
                            final_state=full, steps=steps)
    bounds = running_bounds(trajectory, params)
    rows = [ComparisonRow(t=s[0], lyap_full=s[1], S0=bounds.S0, field_distance=s[2]) for s in samples]
    logger.info(f"Comparison done: terminal L^e={rows[-1].lyap_full:.4e}, "
                f"max distance={max(r.field_distance for r in rows):.4e}")
    return ComparisonReport(rows=rows, omega_bar=params.omega_bar, bounds=bounds,
                            full=trajectory, final_driftflux=drift)


def run_driftflux(scenario):
    """Drift-flux model alone from 0 to t_end; returns the final state."""
    disc = scenario.disc
    state = DriftFluxState.from_mixture(scenario.initial)
    t = 0.0
    while t < disc.t_end:
        with step_failures(scenario.name, t):
            dt = driftflux_cfl_dt(state, disc)
            landing = t + dt >= disc.t_end
            if landing:
                dt = disc.t_end - t
            state = driftflux_step(state, scenario.bc, scenario.params, disc, t, dt)
        t = disc.t_end if landing else t + dt
    return state
