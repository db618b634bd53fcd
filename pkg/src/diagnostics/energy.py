"""
Lyapunov function, energies, boundary terms and the perturbation integral.

All integrals use the midpoint rule on the solver grid. Spatial derivatives
are central in the interior and one-sided at the ends (numpy.gradient).
Boundary values are the values of the first and last cell.
"""
import dataclasses
import logging

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..gas.laws import potential_second, pressure_potential
from ..mixture.coupling import barycentric_velocity, deviations

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class DiagnosticsFrame:
    t: float
    lyap: float
    Bhat: float
    BL: float
    B0: float
    I: float
    energy_total: float
    energy_mix: float
    m_local: float
    n_local: float
    eps_sq_local: float
    sign_uniform: bool
    rho_left: tuple[float, ...]
    v_left: tuple[float, ...]
    rho_right: tuple[float, ...]
    v_right: tuple[float, ...]
    mass: tuple[float, ...] = ()


def _integrate(values, dx):
    return float(np.sum(values) * dx)


def lyapunov(state):
    """L^e = ∫ Σ_i ½ ρ^i (v^i − v)² dx."""
    u = deviations(state)
    return _integrate(0.5 * state.rho * u ** 2, state.dx)


def energy_densities(state):
    """
    Per-cell Σ_i H^i with H^i = ½ρ^i(v^i)² + P_i(ρ^i), and
    H^mix = ½ρv² + Σ_i P_i(ρ^i).
    """
    potentials = np.array([pressure_potential(law, state.rho[i]) for i, law in enumerate(state.laws)])
    v = barycentric_velocity(state)
    total = (0.5 * state.rho * state.v ** 2 + potentials).sum(axis=0)
    mix = 0.5 * state.rho.sum(axis=0) * v ** 2 + potentials.sum(axis=0)
    return total, mix


def energy_identity_check(state):
    """|∫ΣH^i − ∫H^mix − L^e|; vanishes up to rounding."""
    total, mix = energy_densities(state)
    return abs(_integrate(total, state.dx) - _integrate(mix, state.dx) - lyapunov(state))


def _boundary_term(rho, v):
    v_bary = np.sum(rho * v) / np.sum(rho)
    return float(-0.5 * np.sum(rho * v * (v_bary - v) ** 2))


def boundary_terms(state):
    """(B̂, B_L, B_0) with B_x = −½ Σ_i ρ^i v^i (v − v^i)² at x and B̂ = B_L − B_0."""
    bl = _boundary_term(state.rho[:, -1], state.v[:, -1])
    b0 = _boundary_term(state.rho[:, 0], state.v[:, 0])
    return bl - b0, bl, b0


def density_gradients(state):
    return np.gradient(state.rho, state.dx, axis=1)


def pressure_gradient_terms(state):
    """P_i″(ρ^i) ρ^i_x per component and cell."""
    second = np.array([potential_second(law, state.rho[i]) for i, law in enumerate(state.laws)])
    return second * density_gradients(state)


def integral_I(state):
    """I(t) = Σ_i ∫ (v^i − v) ρ^i P_i″(ρ^i) ρ^i_x dx."""
    return _integrate(deviations(state) * state.rho * pressure_gradient_terms(state), state.dx)


def local_maxima(state, params):
    """
    Grid maxima of (θ/2)|v^i| + |∂_x v|, of (θ/2)|v| and of ρ^i|P_i″ρ^i_x|².
    """
    v = barycentric_velocity(state)
    v_x = np.gradient(v, state.dx)
    m_local = float(np.max(0.5 * params.theta * np.abs(state.v) + np.abs(v_x)))
    n_local = float(np.max(0.5 * params.theta * np.abs(v)))
    eps_sq = float(np.max(state.rho * pressure_gradient_terms(state) ** 2))
    return m_local, n_local, eps_sq


def sign_uniform(state):
    """True when sign(v^i) does not depend on i in any cell."""
    positive = np.all(state.v >= 0, axis=0)
    negative = np.all(state.v <= 0, axis=0)
    return bool(np.all(positive | negative))


def component_masses(state):
    """∫ρ^i dx per component."""
    return state.rho.sum(axis=1) * state.dx


def frame(state, params, t):
    bhat, bl, b0 = boundary_terms(state)
    total, mix = energy_densities(state)
    m_local, n_local, eps_sq = local_maxima(state, params)
    uniform = sign_uniform(state)
    if not uniform:
        logger.warning(f"Velocity signs differ between components at t={t:.6g}")
    return DiagnosticsFrame(
        t=float(t),
        lyap=lyapunov(state),
        Bhat=bhat,
        BL=bl,
        B0=b0,
        I=integral_I(state),
        energy_total=_integrate(total, state.dx),
        energy_mix=_integrate(mix, state.dx),
        m_local=m_local,
        n_local=n_local,
        eps_sq_local=eps_sq,
        sign_uniform=uniform,
        rho_left=tuple(float(x) for x in state.rho[:, 0]),
        v_left=tuple(float(x) for x in state.v[:, 0]),
        rho_right=tuple(float(x) for x in state.rho[:, -1]),
        v_right=tuple(float(x) for x in state.v[:, -1]),
        mass=tuple(float(x) for x in component_masses(state)),
    )


def mass_budget(frames):
    """
    Per frame and component: mass change since the first frame minus the net
    boundary inflow ∫(ρ^i v^i|_0 − ρ^i v^i|_L) dt, trapezoidal over the frame
    times. Shape (frames, n); zero up to time and space discretization error.
    """
    t = np.array([f.t for f in frames])
    mass = np.array([f.mass for f in frames])
    flux = np.array([np.multiply(f.rho_left, f.v_left) - np.multiply(f.rho_right, f.v_right) for f in frames])
    inflow = cumulative_trapezoid(flux, t, axis=0, initial=0.0)
    return (mass - mass[0]) - inflow
