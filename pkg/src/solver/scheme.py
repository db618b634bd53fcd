"""
Characteristic upwind scheme for the diagonal system R_t + D(R) R_x = S(R).
"""
import dataclasses
import logging

import numpy as np

from ..gas.laws import LawKind, pressure_derivative
from ..gas.riemann import riemann_R, riemann_range
from ..mixture.coupling import deviations, friction_riemann
from ..mixture.state import RiemannField
from ..utils.errors import (BoundaryError, CFLError, ConfigError, DegenerateError, DomainError,
                            QuadratureError, RangeError, TableRangeError, VacuumError)

logger = logging.getLogger(__name__)

# above this value of Ω̄·dt the velocity relaxation is integrated exactly
STIFF_COUPLING = 0.5


@dataclasses.dataclass(frozen=True)
class Discretization:
    """
    cells: number of grid cells K.
    cfl: Courant number in (0, 1].
    t_end: time horizon T in seconds.
    output_stride: steps between diagnostic frames.
    sonic_tolerance: fraction of the sound speed by which a characteristic may
        point the wrong way at a boundary before the run is aborted.
    """
    cells: int
    cfl: float
    t_end: float
    output_stride: int = 1
    sonic_tolerance: float = 1e-2

    def __post_init__(self):
        if self.cells < 4:
            raise ConfigError(f"Need at least 4 cells, got {self.cells}")
        if not 0 < self.cfl <= 1:
            raise ConfigError(f"CFL number must lie in (0, 1], got {self.cfl}")
        if self.t_end < 0:
            raise ConfigError(f"Horizon must be non-negative, got {self.t_end}")
        if self.output_stride < 1:
            raise ConfigError(f"Output stride must be >= 1, got {self.output_stride}")


def sound_speeds(state):
    return np.array([np.sqrt(pressure_derivative(law, state.rho[i]))
                     for i, law in enumerate(state.laws)])


def characteristic_speeds(state):
    """(λ₊, λ₋) for every component and cell."""
    c = sound_speeds(state)
    return state.v + c, state.v - c


def cfl_dt(state, disc):
    lam_plus, lam_minus = characteristic_speeds(state)
    speed = float(max(np.max(np.abs(lam_plus)), np.max(np.abs(lam_minus))))
    if speed <= 0:
        raise DegenerateError("Maximal characteristic speed is zero")
    return disc.cfl * state.dx / speed


def _check_floor(field, t):
    """Every cell average must stay inside the range of R̃ of its law."""
    for i, law in enumerate(field.laws):
        lo, hi = riemann_range(law)
        mean = 0.5 * (field.r_plus[i] + field.r_minus[i])
        bad = ~np.isfinite(mean) | (mean <= lo) | (mean > hi)
        if np.any(bad):
            cell = int(np.flatnonzero(bad)[0])
            if law.kind is LawKind.TABULATED and np.isfinite(mean[cell]):
                rho_lo, rho_hi = law.density_range
                raise TableRangeError(f"Density of component {i} left the table range "
                                      f"[{rho_lo:.6g}, {rho_hi:.6g}]", t=t, cell=cell)
            raise VacuumError(f"Density of component {i} reached the vacuum floor", t=t, cell=cell)


def _check_directions(lam_plus, lam_minus, c, tol, t):
    """
    Subsonic pattern at both ends: λ₋ < 0 < λ₊ up to tol·c.
    """
    last = lam_plus.shape[1] - 1
    for i in range(lam_plus.shape[0]):
        if lam_plus[i, 0] <= 0:
            raise BoundaryError(f"Component {i}: λ+ <= 0 at x=0, inflow condition cannot be imposed",
                                t=t, cell=0)
        if lam_minus[i, 0] > tol * c[i, 0]:
            raise BoundaryError(f"Component {i}: supersonic inflow at x=0 (λ- > 0)", t=t, cell=0)
        if lam_minus[i, last] > tol * c[i, last]:
            raise BoundaryError(f"Component {i}: λ- > 0 at x=L, density condition cannot be imposed",
                                t=t, cell=last)
        if lam_plus[i, last] < -tol * c[i, last]:
            raise BoundaryError(f"Component {i}: supersonic backflow at x=L (λ+ < 0)", t=t, cell=last)


def ghost_values(field, bc, t):
    """
    Ghost cells from the characteristic closure, imposed at the boundary faces.
    The outgoing invariant is extrapolated linearly to the face (R₋ at x=0, R₊
    at x=L), the incoming one follows from R₊ = R₋ + 2v̄(t) at x=0 and
    R₋ = −R₊ + 2R̃(ρ̄^i(t)) at x=L, and the ghost value continues the line
    through the first interior cell and the face.
    """
    rp, rm = field.r_plus, field.r_minus
    minus_face = 1.5 * rm[:, 0] - 0.5 * rm[:, 1]
    plus_face = minus_face + 2.0 * bc.vbar(t)
    left = (2.0 * plus_face - rp[:, 0], 2.0 * rm[:, 0] - rm[:, 1])

    plus_face = 1.5 * rp[:, -1] - 0.5 * rp[:, -2]
    try:
        outlet = np.array([riemann_R(law, bc.rhobar[i](t)) for i, law in enumerate(field.laws)])
    except (DomainError, RangeError, QuadratureError) as e:
        raise BoundaryError(f"Outlet density not admissible: {e}", t=t, cell=rp.shape[1] - 1) from e
    minus_face = -plus_face + 2.0 * outlet
    right = (2.0 * rp[:, -1] - rp[:, -2], 2.0 * minus_face - rm[:, -1])
    return left, right


def _upwind(w, ghost_left, ghost_right, speed, dt, dx):
    padded = np.concatenate([ghost_left[:, None], w, ghost_right[:, None]], axis=1)
    backward = padded[:, 1:-1] - padded[:, :-2]
    forward = padded[:, 2:] - padded[:, 1:-1]
    return w - dt / dx * (np.maximum(speed, 0.0) * backward + np.minimum(speed, 0.0) * forward)


def step_riemann(field, bc, params, disc, t, dt):
    """
    Advance the Riemann field from t to t + dt. Transport is upwinded per
    characteristic family, the source is explicit and evaluated at time t.
    """
    _check_floor(field, t)
    try:
        state = field.to_state()
    except RangeError as e:
        raise VacuumError(str(e), t=t) from e
    bound = cfl_dt(state, disc)
    if dt > bound * (1.0 + 1e-12):
        raise CFLError(f"Time step {dt:.6g} exceeds CFL bound {bound:.6g}", t=t)

    c = sound_speeds(state)
    lam_plus, lam_minus = state.v + c, state.v - c
    _check_directions(lam_plus, lam_minus, c, disc.sonic_tolerance, t)

    (lp, lm), (rp, rm) = ghost_values(field, bc, t)
    dx = field.dx
    r_plus = _upwind(field.r_plus, lp, rp, lam_plus, dt, dx)
    r_minus = _upwind(field.r_minus, lm, rm, lam_minus, dt, dx)

    dv = -dt * friction_riemann(params.theta, field.r_plus, field.r_minus)
    u = deviations(state)
    if params.omega_bar * dt > STIFF_COUPLING:
        dv -= (1.0 - np.exp(-params.omega_bar * dt)) * u
    else:
        dv -= params.omega_bar * dt * u
    r_plus += dv
    r_minus -= dv

    if not (np.all(np.isfinite(r_plus)) and np.all(np.isfinite(r_minus))):
        cell = int(np.flatnonzero(~np.isfinite(r_plus + r_minus).all(axis=0))[0])
        raise VacuumError("Non-finite Riemann variables after update", t=t, cell=cell)
    new_field = RiemannField(laws=field.laws, length=field.length, r_plus=r_plus, r_minus=r_minus)
    _check_floor(new_field, t + dt)
    return new_field


def step(state, bc, params, disc, t, dt):
    """
    One time step in physical variables; see step_riemann.
    """
    return step_riemann(state.to_riemann(), bc, params, disc, t, dt).to_state()
