"""
Pressure laws and pressure potentials of the gas components.
"""
import dataclasses
import enum
import functools
import logging

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from ..utils.errors import ConfigError, DomainError, QuadratureError

logger = logging.getLogger(__name__)

QUAD_TOL = 1e-12
# quadrature error estimates above this relative size are failures
QUAD_FAIL_TOL = 1e-8
ROOT_TOL = 1e-10
RHO_MIN = 1e-9


class LawKind(enum.Enum):
    ISOTHERMAL_IDEAL = "isothermal"
    ISENTROPIC = "isentropic"
    TABULATED = "tabulated"


@dataclasses.dataclass(frozen=True)
class PressureLaw:
    """
    Pressure model p(ρ) of one component.

    Isothermal ideal gas: p = a²ρ with sound speed a.
    Isentropic gas: p = aρ^γ with coefficient a and exponent γ > 1.
    Tabulated: strictly increasing samples (ρ, p), interpolated by a monotone
    piecewise cubic so that p′ stays positive.
    """
    kind: LawKind
    a: float | None = None
    gamma: float | None = None
    rho_table: tuple[float, ...] = ()
    p_table: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind in (LawKind.ISOTHERMAL_IDEAL, LawKind.ISENTROPIC):
            if self.a is None or not self.a > 0:
                raise ConfigError(f"{self.kind.value} law needs a > 0, got {self.a}")
        if self.kind is LawKind.ISENTROPIC and (self.gamma is None or not self.gamma > 1):
            raise ConfigError(f"isentropic law needs gamma > 1, got {self.gamma}")
        if self.kind is LawKind.TABULATED:
            rho = np.asarray(self.rho_table, dtype=float)
            p = np.asarray(self.p_table, dtype=float)
            if rho.size < 3 or rho.shape != p.shape:
                raise ConfigError("tabulated law needs at least 3 matching (rho, p) samples")
            if rho[0] <= 0 or np.any(np.diff(rho) <= 0) or np.any(np.diff(p) <= 0):
                raise ConfigError("tabulated law must be strictly increasing in rho and p with rho > 0")

    @classmethod
    def isothermal(cls, a):
        return cls(kind=LawKind.ISOTHERMAL_IDEAL, a=float(a))

    @classmethod
    def isentropic(cls, a, gamma):
        return cls(kind=LawKind.ISENTROPIC, a=float(a), gamma=float(gamma))

    @classmethod
    def tabulated(cls, rho, p):
        return cls(kind=LawKind.TABULATED,
                   rho_table=tuple(float(r) for r in rho),
                   p_table=tuple(float(x) for x in p))

    @classmethod
    def from_config(cls, config):
        """
        Build a law from a scenario-file table such as
        {"law": "isothermal", "sound_speed_m_per_s": 340.0}.
        """
        kind = config.get("law")
        if kind == "isothermal":
            return cls.isothermal(config["sound_speed_m_per_s"])
        if kind == "isentropic":
            return cls.isentropic(config["coefficient"], config["gamma"])
        if kind == "tabulated":
            return cls.tabulated(config["density_kg_per_m3"], config["pressure_pa"])
        raise ConfigError(f"Unknown pressure law: {kind!r}")

    def to_config(self):
        if self.kind is LawKind.ISOTHERMAL_IDEAL:
            return {"law": "isothermal", "sound_speed_m_per_s": self.a}
        if self.kind is LawKind.ISENTROPIC:
            return {"law": "isentropic", "coefficient": self.a, "gamma": self.gamma}
        return {"law": "tabulated",
                "density_kg_per_m3": list(self.rho_table),
                "pressure_pa": list(self.p_table)}

    @property
    def density_range(self):
        if self.kind is LawKind.TABULATED:
            return self.rho_table[0], self.rho_table[-1]
        return 0.0, np.inf

    @functools.cached_property
    def anchor(self):
        """Lower integration limit of R̃; 1 unless a table excludes it."""
        lo, hi = self.density_range
        if lo <= 1.0 <= hi:
            return 1.0
        logger.info(f"Tabulated law range [{lo}, {hi}] excludes 1, anchoring R̃ at {lo}")
        return lo

    @functools.cached_property
    def interpolant(self):
        return PchipInterpolator(np.asarray(self.rho_table), np.asarray(self.p_table), extrapolate=False)

    @functools.cached_property
    def slope(self):
        return self.interpolant.derivative()


def _scalar_or_array(values, like):
    return float(values) if np.ndim(like) == 0 else values


def check_density(law, rho):
    """
    Return rho as a float array, raising DomainError for rho ≤ 0 or outside a table.
    """
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(~np.isfinite(rho_arr)) or np.any(rho_arr <= 0):
        raise DomainError(f"Density must be positive and finite, got min {np.min(rho_arr)}")
    lo, hi = law.density_range
    if np.any(rho_arr < lo) or np.any(rho_arr > hi):
        raise DomainError(f"Density outside table range [{lo}, {hi}]")
    return rho_arr


def pressure(law, rho):
    r = check_density(law, rho)
    if law.kind is LawKind.ISOTHERMAL_IDEAL:
        p = law.a ** 2 * r
    elif law.kind is LawKind.ISENTROPIC:
        p = law.a * r ** law.gamma
    else:
        p = law.interpolant(r)
    return _scalar_or_array(p, rho)


def pressure_derivative(law, rho):
    r = check_density(law, rho)
    if law.kind is LawKind.ISOTHERMAL_IDEAL:
        dp = np.full_like(r, law.a ** 2)
    elif law.kind is LawKind.ISENTROPIC:
        dp = law.a * law.gamma * r ** (law.gamma - 1.0)
    else:
        dp = law.slope(r)
        if np.any(dp <= 0):
            raise DomainError("Tabulated pressure law has a non-positive slope")
    return _scalar_or_array(dp, rho)


def potential_second(law, rho):
    """P″(ρ) = p′(ρ)/ρ."""
    r = check_density(law, rho)
    return _scalar_or_array(np.asarray(pressure_derivative(law, r)) / r, rho)


def sound_speed(law, rho):
    return _scalar_or_array(np.sqrt(np.asarray(pressure_derivative(law, rho))), rho)


def _quad(f, lo, hi):
    value, err = quad(f, lo, hi, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    if err > QUAD_FAIL_TOL * max(1.0, abs(value)):
        raise QuadratureError(f"Quadrature on [{lo}, {hi}] reached error {err:.3e}")
    return value


def pressure_potential(law, rho):
    """
    A convex pressure potential P with P″ = p′/ρ.
    Only differences of P enter the energy balances, so the additive
    constant is fixed per law kind.
    """
    r = check_density(law, rho)
    if law.kind is LawKind.ISOTHERMAL_IDEAL:
        pot = law.a ** 2 * r * np.log(r)
    elif law.kind is LawKind.ISENTROPIC:
        pot = law.a * r ** law.gamma / (law.gamma - 1.0)
    else:
        pot = r * node_integral(law, _potential_integrand(law), _potential_nodes(law), r)
    return _scalar_or_array(pot, rho)


def _potential_integrand(law):
    return lambda s: float(law.interpolant(s)) / s ** 2


def tabulated_node_values(law, f):
    """
    ∫_anchor^ρ_j f at the table densities ρ_j, one quadrature per interval
    so that no integral crosses a knot of the interpolant.
    """
    rho = np.asarray(law.rho_table)
    values = np.zeros_like(rho)
    for j in range(1, rho.size):
        values[j] = values[j - 1] + _quad(f, rho[j - 1], rho[j])
    j = table_interval(law, law.anchor)
    return values - (values[j] + _quad(f, rho[j], law.anchor))


def table_interval(law, x):
    """Index j of the table interval [ρ_j, ρ_{j+1}] holding x."""
    nodes = law.rho_table
    return min(max(int(np.searchsorted(nodes, x, side="right")) - 1, 0), len(nodes) - 2)


def node_integral(law, f, base, rho):
    """∫_anchor^ρ f from the node values base and one quadrature inside the last interval."""
    nodes = law.rho_table
    flat = []
    for x in np.ravel(rho):
        j = table_interval(law, x)
        flat.append(base[j] + _quad(f, nodes[j], x))
    return np.array(flat).reshape(np.shape(rho))


@functools.lru_cache(maxsize=32)
def _potential_nodes(law):
    return tabulated_node_values(law, _potential_integrand(law))
