"""
Run orchestration: steps a scenario from 0 to its horizon and records frames.
"""
import contextlib
import dataclasses
import logging

import numpy as np

from ..diagnostics.energy import frame
from ..mixture.state import MixtureState, PhysicsParams
from ..utils.errors import ConfigError, DomainError, QuadratureError, RangeError, SolverError
from .boundary import BoundaryConditions, CompatibilityReport, check_c1_compatibility
from .scheme import Discretization, cfl_dt, step_riemann

logger = logging.getLogger(__name__)

# law evaluations that fail inside a step are reported as solver failures
GAS_ERRORS = (DomainError, RangeError, QuadratureError)


@contextlib.contextmanager
def step_failures(name, t):
    """Log a failing step of run `name` and re-raise gas-law errors as SolverError at time t."""
    try:
        yield
    except SolverError as e:
        logger.error(f"Run '{name}' aborted: {e}")
        raise
    except GAS_ERRORS as e:
        logger.error(f"Run '{name}' aborted at t={t:.6g}: {e}")
        raise SolverError(str(e), t=t) from e


@dataclasses.dataclass(frozen=True, eq=False)
class Scenario:
    """
    Everything a run needs: initial mixture state (which fixes the laws, the
    pipe length and the grid), physics constants, boundary signals and
    discretization controls.
    """
    initial: MixtureState
    params: PhysicsParams
    bc: BoundaryConditions
    disc: Discretization
    snapshot_times: tuple[float, ...] = ()
    name: str = "scenario"

    def __post_init__(self):
        if self.initial.cells != self.disc.cells:
            raise ConfigError(f"Initial state has {self.initial.cells} cells, "
                             f"discretization asks for {self.disc.cells}")
        if len(self.bc.rhobar) != self.initial.n:
            raise ConfigError("One outflow density signal per component is required")

    @property
    def length(self):
        return self.initial.length

    def with_omega_bar(self, omega_bar):
        return dataclasses.replace(self, params=PhysicsParams(self.params.theta, omega_bar))


@dataclasses.dataclass
class Trajectory:
    frames: list
    length: float
    compatibility: CompatibilityReport
    final_state: MixtureState
    snapshots: dict = dataclasses.field(default_factory=dict)
    steps: int = 0

    @property
    def times(self):
        return np.array([f.t for f in self.frames])

    @property
    def lyapunov(self):
        return np.array([f.lyap for f in self.frames])


def run(scenario):
    """
    Integrate the scenario with dt = cfl_dt each step, shortening steps to land
    exactly on snapshot times and on t_end. Frames are emitted every
    output_stride steps and at t_end.
    """
    disc = scenario.disc
    params = scenario.params
    state = scenario.initial
    scenario.bc.validate(disc.t_end)
    report = check_c1_compatibility(state, scenario.bc, params)
    logger.info(f"Starting run '{scenario.name}': n={state.n}, K={disc.cells}, T={disc.t_end}")

    with step_failures(scenario.name, 0.0):
        field = state.to_riemann()
        frames = [frame(state, params, 0.0)]
    stops = sorted({t for t in scenario.snapshot_times if 0.0 <= t <= disc.t_end})
    snapshots = {}
    if stops and stops[0] == 0.0:
        snapshots[0.0] = state
        stops.pop(0)

    t = 0.0
    steps = 0
    while t < disc.t_end:
        target = min(stops[0], disc.t_end) if stops else disc.t_end
        with step_failures(scenario.name, t):
            dt = cfl_dt(state, disc)
            landing = t + dt >= target
            if landing:
                dt = target - t
            field = step_riemann(field, scenario.bc, params, disc, t, dt)
            state = field.to_state()
        t = target if landing else t + dt
        steps += 1
        if stops and landing and t == stops[0]:
            snapshots[t] = state
            stops.pop(0)
        if steps % disc.output_stride == 0 or t >= disc.t_end:
            with step_failures(scenario.name, t):
                frames.append(frame(state, params, t))
            logger.debug(f"Frame at t={t:.6g}: L^e={frames[-1].lyap:.6e}")

    logger.info(f"Run '{scenario.name}' finished after {steps} steps, {len(frames)} frames.")
    return Trajectory(frames=frames, length=state.length, compatibility=report,
                      final_state=state, snapshots=snapshots, steps=steps)
