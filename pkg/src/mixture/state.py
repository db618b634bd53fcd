"""
Mixture state on the pipe grid and its Riemann-variable representation.
"""
import dataclasses

import numpy as np

from ..gas.laws import PressureLaw
from ..gas.riemann import ComponentState, component_to_riemann, riemann_to_component
from ..utils.errors import ConfigError, DomainError


@dataclasses.dataclass(frozen=True)
class PhysicsParams:
    """
    theta: friction ratio λ_fric/D in 1/m.
    omega_bar: velocity coupling constant Ω̄ in 1/s.
    """
    theta: float
    omega_bar: float

    def __post_init__(self):
        if self.theta < 0:
            raise ConfigError(f"theta must be >= 0, got {self.theta}")
        if not self.omega_bar > 0:
            raise ConfigError(f"omega_bar must be > 0, got {self.omega_bar}")


def cell_centers(length, cells):
    dx = length / cells
    return (np.arange(cells) + 0.5) * dx


@dataclasses.dataclass(frozen=True, eq=False)
class MixtureState:
    """
    Densities rho[i, k] and velocities v[i, k] of n components on the uniform
    cell-centred grid x_k = (k + 1/2) dx of the pipe [0, length].
    """
    laws: tuple[PressureLaw, ...]
    length: float
    rho: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        rho = np.atleast_2d(np.asarray(self.rho, dtype=float))
        v = np.atleast_2d(np.asarray(self.v, dtype=float))
        if rho.shape != v.shape or rho.shape[0] != len(self.laws):
            raise ConfigError(f"State shape mismatch: rho {rho.shape}, v {v.shape}, {len(self.laws)} laws")
        if not self.length > 0:
            raise ConfigError(f"Pipe length must be positive, got {self.length}")
        if np.any(~np.isfinite(rho)) or np.any(rho <= 0):
            raise DomainError("All component densities must be positive")
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

    @property
    def grid(self):
        return cell_centers(self.length, self.cells)

    @property
    def q(self):
        return self.rho * self.v

    def component(self, i):
        return ComponentState(rho=self.rho[i], v=self.v[i])

    def replace(self, rho=None, v=None):
        return MixtureState(laws=self.laws, length=self.length,
                            rho=self.rho if rho is None else rho,
                            v=self.v if v is None else v)

    @classmethod
    def from_riemann(cls, field):
        rho = np.empty_like(field.r_plus)
        v = np.empty_like(field.r_plus)
        for i, law in enumerate(field.laws):
            comp = riemann_to_component(law, field.r_plus[i], field.r_minus[i])
            rho[i], v[i] = comp.rho, comp.v
        return cls(laws=field.laws, length=field.length, rho=rho, v=v)

    def to_riemann(self):
        r_plus = np.empty_like(self.rho)
        r_minus = np.empty_like(self.rho)
        for i, law in enumerate(self.laws):
            r_plus[i], r_minus[i] = component_to_riemann(law, self.component(i))
        return RiemannField(laws=self.laws, length=self.length, r_plus=r_plus, r_minus=r_minus)


@dataclasses.dataclass(frozen=True, eq=False)
class RiemannField:
    """
    The 2n diagonal variables R₊^i, R₋^i on the grid.
    """
    laws: tuple[PressureLaw, ...]
    length: float
    r_plus: np.ndarray
    r_minus: np.ndarray

    @property
    def cells(self):
        return self.r_plus.shape[1]

    @property
    def dx(self):
        return self.length / self.cells

    def to_state(self):
        return MixtureState.from_riemann(self)
