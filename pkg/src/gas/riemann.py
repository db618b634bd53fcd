"""
Riemann invariants and characteristic speeds of a single component.
"""
import dataclasses
import functools
import logging

import numpy as np
from scipy.optimize import brentq

from ..utils.errors import DomainError, RangeError
from .laws import (LawKind, RHO_MIN, ROOT_TOL, _scalar_or_array, check_density, node_integral,
                   pressure_derivative, tabulated_node_values)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ComponentState:
    """
    Density and velocity of one component, at a point or on a grid.
    """
    rho: float | np.ndarray
    v: float | np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.rho) <= 0):
            raise DomainError("Component density must be strictly positive")

    @property
    def q(self):
        """Mass flow rate ρv."""
        return self.rho * self.v


def _isentropic_scale(law):
    return np.sqrt(law.a * law.gamma)


def _tabulated_integrand(law):
    return lambda r: float(np.sqrt(law.slope(r))) / r


@functools.lru_cache(maxsize=32)
def _tabulated_nodes(law):
    """R̃ at the table densities."""
    return tabulated_node_values(law, _tabulated_integrand(law))


def riemann_R(law, rho):
    """
    R̃(ρ) = ∫_1^ρ √p′(r)/r dr.
    """
    r = check_density(law, rho)
    if law.kind is LawKind.ISOTHERMAL_IDEAL:
        out = law.a * np.log(r)
    elif law.kind is LawKind.ISENTROPIC:
        k = _isentropic_scale(law)
        out = 2.0 * k / (law.gamma - 1.0) * (r ** ((law.gamma - 1.0) / 2.0) - 1.0)
    else:
        out = node_integral(law, _tabulated_integrand(law), _tabulated_nodes(law), r)
    return _scalar_or_array(out, rho)


def riemann_range(law):
    """Open interval of values attained by R̃ above the density floor."""
    if law.kind is LawKind.ISOTHERMAL_IDEAL:
        return law.a * np.log(RHO_MIN), np.inf
    if law.kind is LawKind.ISENTROPIC:
        return float(riemann_R(law, RHO_MIN)), np.inf
    base = _tabulated_nodes(law)
    return float(base[0]), float(base[-1])


def riemann_R_inverse(law, xi):
    """
    Density ρ with R̃(ρ) = ξ. Raises RangeError when ξ leaves the range of R̃,
    which includes reaching the density floor RHO_MIN.
    """
    x = np.asarray(xi, dtype=float)
    lo, hi = riemann_range(law)
    bad = ~np.isfinite(x) | (x <= lo) | (x > hi)
    if np.any(bad):
        idx = int(np.flatnonzero(np.ravel(bad))[0])
        raise RangeError(f"Riemann coordinate {np.ravel(x)[idx]:.6g} outside range ({lo:.6g}, {hi:.6g}] "
                         f"at index {idx}")
    if law.kind is LawKind.ISOTHERMAL_IDEAL:
        out = np.exp(x / law.a)
    elif law.kind is LawKind.ISENTROPIC:
        k = _isentropic_scale(law)
        base = 1.0 + x * (law.gamma - 1.0) / (2.0 * k)
        out = base ** (2.0 / (law.gamma - 1.0))
    else:
        nodes = law.rho_table
        base = _tabulated_nodes(law)
        flat = []
        for target in np.ravel(x):
            j = min(max(int(np.searchsorted(base, target, side="left")) - 1, 0), len(nodes) - 2)
            flat.append(brentq(lambda r: riemann_R(law, r) - target, nodes[j], nodes[j + 1],
                               xtol=ROOT_TOL * 1e-3, rtol=4 * np.finfo(float).eps))
        out = np.array(flat).reshape(x.shape)
    return _scalar_or_array(out, xi)


def component_to_riemann(law, s):
    """(R₊, R₋) = (R̃(ρ) + v, R̃(ρ) − v)."""
    base = np.asarray(riemann_R(law, s.rho))
    r_plus = base + s.v
    r_minus = base - s.v
    return _scalar_or_array(r_plus, s.rho), _scalar_or_array(r_minus, s.rho)


def riemann_to_component(law, r_plus, r_minus):
    """Inverse of component_to_riemann: v = (R₊−R₋)/2, ρ = R̃⁻¹((R₊+R₋)/2)."""
    r_plus = np.asarray(r_plus, dtype=float) if np.ndim(r_plus) else float(r_plus)
    r_minus = np.asarray(r_minus, dtype=float) if np.ndim(r_minus) else float(r_minus)
    rho = riemann_R_inverse(law, 0.5 * (r_plus + r_minus))
    v = 0.5 * (r_plus - r_minus)
    return ComponentState(rho=rho, v=v)


def eigenvalues(law, s):
    """(λ₊, λ₋) = (v + √p′(ρ), v − √p′(ρ))."""
    c = np.sqrt(np.asarray(pressure_derivative(law, s.rho)))
    lam_plus = s.v + c
    lam_minus = s.v - c
    return _scalar_or_array(lam_plus, s.rho), _scalar_or_array(lam_minus, s.rho)
