"""
Stationary profiles from the steady momentum balance, with optional shooting
on the flow rates to match prescribed outlet densities.
"""
import dataclasses
import logging

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root

from ..gas.laws import pressure_derivative
from ..mixture.state import MixtureState, PhysicsParams, cell_centers
from ..utils.errors import ConfigError, NonconvergenceError, SonicError

logger = logging.getLogger(__name__)

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
SHOOT_TOL = 1e-6


@dataclasses.dataclass(frozen=True)
class StationarySpec:
    """
    Constant flow rates q̃^i and inlet densities ρ̃^i(0) sharing one inlet
    velocity q̃^i/ρ̃^i(0) = v̄.
    """
    q_tilde: tuple[float, ...]
    rho_inlet: tuple[float, ...]
    params: PhysicsParams
    laws: tuple

    def __post_init__(self):
        q = np.asarray(self.q_tilde, dtype=float)
        rho = np.asarray(self.rho_inlet, dtype=float)
        if q.shape != rho.shape or q.size != len(self.laws):
            raise ConfigError("One flow rate, inlet density and law per component is required")
        if np.any(rho <= 0):
            raise ConfigError("Inlet densities must be positive")
        v = q / rho
        if np.ptp(v) > 1e-12 * max(1.0, float(np.max(np.abs(v)))):
            raise ConfigError(f"Inlet velocities q/rho differ between components: {v}")

    @classmethod
    def from_inlet_velocity(cls, q_tilde, vbar, params, laws):
        """Inlet densities ρ̃^i(0) = q̃^i/v̄."""
        if vbar <= 0:
            raise ConfigError(f"Inlet velocity must be positive, got {vbar}")
        rho = tuple(float(q) / vbar for q in q_tilde)
        return cls(q_tilde=tuple(float(q) for q in q_tilde), rho_inlet=rho, params=params, laws=tuple(laws))

    @property
    def inlet_velocity(self):
        return self.q_tilde[0] / self.rho_inlet[0]


def _sonic_margin(spec, rho):
    q = np.asarray(spec.q_tilde)
    dp = np.array([pressure_derivative(law, r) for law, r in zip(spec.laws, rho)])
    return dp - (q / rho) ** 2


def stationary_rhs(x, rho, spec):
    """
    ρ^i_x from (p^i + q²/ρ^i)_x = −½θ q|q|/ρ^i − Ω̄(q − ρ^i Σq/Σρ).
    """
    q = np.asarray(spec.q_tilde)
    margin = _sonic_margin(spec, rho)
    if np.any(margin <= 0):
        raise SonicError(f"Flow is not subsonic at x={x:.6g}")
    mix_v = q.sum() / rho.sum()
    force = -0.5 * spec.params.theta * q * np.abs(q) / rho - spec.params.omega_bar * (q - mix_v * rho)
    return force / margin


def stationary_solution(spec, length):
    """Dense solution of the profile ODE on [0, length]."""
    rho0 = np.asarray(spec.rho_inlet, dtype=float)
    if np.any(_sonic_margin(spec, rho0) <= 0):
        raise SonicError("Inlet state is not subsonic")

    def rhs(x, rho):
        return stationary_rhs(x, rho, spec)

    def sonic(x, rho):
        if np.any(rho <= 0):
            return -1.0
        return float(np.min(_sonic_margin(spec, rho)))
    sonic.terminal = True
    sonic.direction = -1

    sol = solve_ivp(rhs, (0.0, length), rho0, method="RK45",
                    rtol=ODE_RTOL, atol=ODE_ATOL, dense_output=True, events=sonic)
    if sol.status == 1:
        raise SonicError(f"Profile becomes sonic at x={sol.t_events[0][0]:.6g}")
    if not sol.success:
        raise NonconvergenceError(f"Stationary profile integration failed: {sol.message}")
    return sol


def stationary_profile(spec, length, cells):
    """Stationary state sampled at the cell centres."""
    sol = stationary_solution(spec, length)
    rho = sol.sol(cell_centers(length, cells))
    q = np.asarray(spec.q_tilde)[:, None]
    return MixtureState(laws=spec.laws, length=length, rho=rho, v=q / rho)


def shoot_stationary(vbar, rho_outlet, params, laws, length, q_guess=None, tol=SHOOT_TOL):
    """
    Find flow rates q̃^i whose profile, started at ρ̃^i(0) = q̃^i/v̄, ends at
    ρ̃^i(L) = ρ̄^i. Secant-type (hybrid Powell) iteration on q̃.
    """
    target = np.asarray(rho_outlet, dtype=float)
    guess = vbar * target if q_guess is None else np.asarray(q_guess, dtype=float)

    def mismatch(q):
        spec = StationarySpec.from_inlet_velocity(q, vbar, params, laws)
        return stationary_solution(spec, length).y[:, -1] - target

    result = root(mismatch, guess, method="hybr", options={"xtol": 1e-12})
    residual = float(np.max(np.abs(mismatch(result.x))))
    if residual > tol:
        raise NonconvergenceError(f"Shooting did not match outlet densities: residual {residual:.3e}")
    logger.info(f"Shooting converged after {result.nfev} evaluations, residual {residual:.3e}")
    return StationarySpec.from_inlet_velocity(result.x, vbar, params, laws)
