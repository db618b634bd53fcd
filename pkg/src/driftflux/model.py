"""
Drift-flux reduction: n densities convected by one shared velocity.

    ρ^i_t + (ρ^i v)_x = 0
    v_t + v v_x + Σ_i (ρ^i/ρ) P_i″(ρ^i) ρ^i_x = −½θ v|v|

Written as w_t + A(w) w_x = S with w = (ρ^1, ..., ρ^n, v) and upwinded per
characteristic family of A (eigenvalues v, v ± c_mix).
"""
import dataclasses
import logging

import numpy as np

from ..gas.laws import RHO_MIN, LawKind, potential_second, pressure_derivative
from ..gas.riemann import riemann_R, riemann_R_inverse
from ..mixture.state import MixtureState
from ..mixture.coupling import barycentric_velocity
from ..utils.errors import (BoundaryError, CFLError, ConfigError, DegenerateError, DomainError,
                            QuadratureError, RangeError, TableRangeError, VacuumError)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class DriftFluxState:
    laws: tuple
    length: float
    rho: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        rho = np.atleast_2d(np.asarray(self.rho, dtype=float))
        v = np.asarray(self.v, dtype=float)
        if rho.shape[0] != len(self.laws) or v.shape != (rho.shape[1],):
            raise ConfigError(f"Drift-flux shape mismatch: rho {rho.shape}, v {v.shape}")
        if np.any(~np.isfinite(rho)) or np.any(rho <= 0):
            raise VacuumError("Drift-flux densities must stay positive")
        object.__setattr__(self, "laws", tuple(self.laws))
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "v", v)

    @property
    def n(self):
        return self.rho.shape[0]

    @property
    def cells(self):
        return self.rho.shape[1]

    @property
    def dx(self):
        return self.length / self.cells

    @classmethod
    def from_mixture(cls, state):
        """Same densities, velocity replaced by the barycentric one."""
        return cls(laws=state.laws, length=state.length, rho=state.rho.copy(),
                   v=barycentric_velocity(state))

    def to_mixture(self):
        return MixtureState(laws=self.laws, length=self.length, rho=self.rho,
                            v=np.broadcast_to(self.v, self.rho.shape).copy())


def mixture_sound_speed(state):
    """c_mix² = Σ_i ρ^i p_i′(ρ^i) / ρ."""
    dp = np.array([pressure_derivative(law, state.rho[i]) for i, law in enumerate(state.laws)])
    return np.sqrt((state.rho * dp).sum(axis=0) / state.rho.sum(axis=0))


def driftflux_cfl_dt(state, disc):
    speed = float(np.max(np.abs(state.v) + mixture_sound_speed(state)))
    if speed <= 0:
        raise DegenerateError("Maximal drift-flux speed is zero")
    return disc.cfl * state.dx / speed


def characteristic_projectors(rho, v, laws):
    """
    Spectral projectors of A = vI + [[0, ρ⃗], [g⃗ᵀ, 0]] with g_i = (ρ^i/ρ)P_i″(ρ^i).

    Right eigenvectors r± = (ρ⃗, ±c) for v ± c, left eigenvectors
    l± = (g⃗, ±c)/(2c²) since g⃗·ρ⃗ = c_mix²; the remaining n−1 directions
    (δρ, 0) with g⃗·δρ = 0 travel with v. Returns (P₊, P₋, P₀) of shape (K, n+1, n+1).
    """
    n, cells = rho.shape
    g = np.array([potential_second(law, rho[i]) for i, law in enumerate(laws)]) * rho / rho.sum(axis=0)
    c = np.sqrt((g * rho).sum(axis=0))
    right_plus = np.vstack([rho, c[None, :]]).T
    right_minus = np.vstack([rho, -c[None, :]]).T
    left_plus = np.vstack([g, c[None, :]]).T / (2.0 * c[:, None] ** 2)
    left_minus = np.vstack([g, -c[None, :]]).T / (2.0 * c[:, None] ** 2)
    p_plus = np.einsum("ka,kb->kab", right_plus, left_plus)
    p_minus = np.einsum("ka,kb->kab", right_minus, left_minus)
    p_zero = np.eye(n + 1)[None, :, :] - p_plus - p_minus
    return p_plus, p_minus, p_zero, c


def split_matrices(rho, v, laws):
    """A⁺ and A⁻, the parts of A with non-negative and non-positive speeds."""
    p_plus, p_minus, p_zero, c = characteristic_projectors(rho, v, laws)
    speeds = (v + c, v - c, v)
    plus = sum(np.maximum(s, 0.0)[:, None, None] * p for s, p in zip(speeds, (p_plus, p_minus, p_zero)))
    minus = sum(np.minimum(s, 0.0)[:, None, None] * p for s, p in zip(speeds, (p_plus, p_minus, p_zero)))
    return plus, minus


def driftflux_ghosts(state, bc, t):
    """
    Ghost states from the same characteristic closure as the full model, imposed
    at the boundary faces. At x=0 each R₋^i = R̃_i(ρ^i) − v is extrapolated
    linearly to the face where v = v̄(t); at x=L ρ^i = ρ̄^i(t) and the face
    velocity is the ρ̄-weighted mean of the extrapolated R₊^i − R̃_i(ρ̄^i).
    Ghost values continue the line through the first interior cell and the face.
    """
    vbar = bc.vbar(t)
    v = state.v
    left_rho, right_rho, face_v = [], [], []
    rhobar = np.array([bc.rhobar[i](t) for i in range(state.n)])
    for i, law in enumerate(state.laws):
        head = riemann_R(law, state.rho[i, :2])
        tail = riemann_R(law, state.rho[i, -2:])
        minus_face = 1.5 * (head[0] - v[0]) - 0.5 * (head[1] - v[1])
        left_rho.append(riemann_R_inverse(law, 2.0 * (minus_face + vbar) - head[0]))
        outlet = riemann_R(law, rhobar[i])
        plus_face = 1.5 * (tail[1] + v[-1]) - 0.5 * (tail[0] + v[-2])
        face_v.append(plus_face - outlet)
        right_rho.append(riemann_R_inverse(law, 2.0 * outlet - tail[1]))
    v_face = float(np.sum(rhobar * np.array(face_v)) / rhobar.sum())
    left = np.append(left_rho, 2.0 * vbar - v[0])
    right = np.append(right_rho, 2.0 * v_face - v[-1])
    return left, right


def driftflux_step(state, bc, params, disc, t, dt):
    """
    Explicit first-order characteristic upwind step of the drift-flux model.
    """
    bound = driftflux_cfl_dt(state, disc)
    if dt > bound * (1.0 + 1e-12):
        raise CFLError(f"Time step {dt:.6g} exceeds CFL bound {bound:.6g}", t=t)
    c = mixture_sound_speed(state)
    tol = disc.sonic_tolerance
    if state.v[0] + c[0] <= 0 or state.v[0] - c[0] > tol * c[0]:
        raise BoundaryError("Drift-flux inflow at x=0 is not subsonic", t=t, cell=0)
    if state.v[-1] - c[-1] > tol * c[-1] or state.v[-1] + c[-1] < -tol * c[-1]:
        raise BoundaryError("Drift-flux outflow at x=L is not subsonic", t=t, cell=state.cells - 1)

    try:
        left, right = driftflux_ghosts(state, bc, t)
    except RangeError as e:
        raise VacuumError(str(e), t=t, cell=0) from e
    except (DomainError, QuadratureError) as e:
        raise BoundaryError(f"Boundary state not admissible: {e}", t=t) from e
    w = np.vstack([state.rho, state.v[None, :]])
    padded = np.concatenate([left[:, None], w, right[:, None]], axis=1)
    backward = padded[:, 1:-1] - padded[:, :-2]
    forward = padded[:, 2:] - padded[:, 1:-1]
    plus, minus = split_matrices(state.rho, state.v, state.laws)
    transport = np.einsum("kab,bk->ak", plus, backward) + np.einsum("kab,bk->ak", minus, forward)
    w_new = w - dt / state.dx * transport
    w_new[-1] -= dt * 0.5 * params.theta * state.v * np.abs(state.v)

    rho_new = w_new[:-1]
    bad = ~np.isfinite(w_new).all(axis=0) | (rho_new <= RHO_MIN).any(axis=0)
    if np.any(bad):
        raise VacuumError("Drift-flux density reached the vacuum floor", t=t, cell=int(np.flatnonzero(bad)[0]))
    for i, law in enumerate(state.laws):
        if law.kind is LawKind.TABULATED:
            rho_lo, rho_hi = law.density_range
            outside = (rho_new[i] < rho_lo) | (rho_new[i] > rho_hi)
            if np.any(outside):
                raise TableRangeError(f"Density of component {i} left the table range "
                                      f"[{rho_lo:.6g}, {rho_hi:.6g}]", t=t, cell=int(np.flatnonzero(outside)[0]))
    return DriftFluxState(laws=state.laws, length=state.length, rho=rho_new, v=w_new[-1])
