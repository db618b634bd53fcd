"""
Closed-form reference solutions: x-uniform decay, traveling waves and
constant states, together with their boundary traces.
"""
import dataclasses

import numpy as np

from ..gas.laws import PressureLaw
from ..gas.riemann import riemann_R_inverse
from ..mixture.state import MixtureState, cell_centers
from ..solver.boundary import AnalyticSignal, BoundaryConditions, ConstantSignal
from ..utils.errors import ConfigError


def example1_velocity(p0, theta, t):
    """v(t) = 1/(P₀ + θt/2)."""
    return 1.0 / (p0 + 0.5 * theta * np.asarray(t, dtype=float))


def example1_state(rho0, p0, theta, t, laws=None, length=1.0, cells=64):
    """
    x-uniform state with ρ^i ≡ ρ₀^i and v^i ≡ 1/(P₀ + θt/2) for all i.
    The laws default to isothermal with unit sound speed.
    """
    rho0 = np.asarray(rho0, dtype=float)
    if np.any(rho0 <= 0) or p0 <= 0:
        raise ConfigError("Uniform decay family needs positive densities and P0 > 0")
    if laws is None:
        laws = tuple(PressureLaw.isothermal(1.0) for _ in rho0)
    v = float(example1_velocity(p0, theta, t))
    rho = np.repeat(rho0[:, None], cells, axis=1)
    return MixtureState(laws=laws, length=length, rho=rho, v=np.full_like(rho, v))


def example1_boundary(rho0, p0, theta):
    vbar = AnalyticSignal(
        func=lambda t: example1_velocity(p0, theta, t),
        deriv=lambda t: -0.5 * theta * example1_velocity(p0, theta, t) ** 2,
        label="example1",
    )
    return BoundaryConditions(vbar=vbar, rhobar=tuple(ConstantSignal(float(r)) for r in rho0))


@dataclasses.dataclass(frozen=True)
class TravelingWaveSpec:
    """
    Traveling wave ρ^i(t, x) = α_i(λt − x) with
    α_i(z) = C_i exp(λ²θ z/(2a_i²)) for laws p^i = a_i²ρ^i, and v^i ≡ λ.
    """
    wave_speed: float
    amplitudes: tuple[float, ...]
    sound_speeds: tuple[float, ...]
    theta: float

    def __post_init__(self):
        if len(self.amplitudes) != len(self.sound_speeds):
            raise ConfigError("One amplitude per sound speed is required")
        if self.wave_speed <= 0 or min(self.amplitudes) <= 0 or min(self.sound_speeds) <= 0:
            raise ConfigError("Traveling wave parameters must be positive")
        if self.theta < 0:
            raise ConfigError("theta must be non-negative")

    @property
    def laws(self):
        return tuple(PressureLaw.isothermal(a) for a in self.sound_speeds)

    def rates(self):
        a = np.asarray(self.sound_speeds, dtype=float)
        return self.wave_speed ** 2 * self.theta / (2.0 * a ** 2)

    def alpha(self, z):
        """α_i(z) for every component; z broadcasts against the component axis."""
        c = np.asarray(self.amplitudes, dtype=float)[:, None]
        return c * np.exp(self.rates()[:, None] * np.atleast_1d(z)[None, :])

    def density(self, t, x):
        return self.alpha(self.wave_speed * t - np.asarray(x, dtype=float))


def example2_state(spec, t, length=1.0, cells=64):
    x = cell_centers(length, cells)
    rho = spec.density(t, x)
    return MixtureState(laws=spec.laws, length=length, rho=rho, v=np.full_like(rho, spec.wave_speed))


def example2_boundary(spec, length=1.0):
    lam = spec.wave_speed
    rates = spec.rates()
    signals = []
    for i, amp in enumerate(spec.amplitudes):
        k = float(rates[i])
        signals.append(AnalyticSignal(
            func=lambda t, amp=amp, k=k: amp * np.exp(k * (lam * t - length)),
            deriv=lambda t, amp=amp, k=k: amp * k * lam * np.exp(k * (lam * t - length)),
            label="example2",
        ))
    return BoundaryConditions(vbar=ConstantSignal(lam), rhobar=tuple(signals))


def constant_state(levels, laws, length=1.0, cells=64):
    """R₊^i = R₋^i = J^i: densities R̃⁻¹(J^i) at rest."""
    rho = np.array([np.full(cells, riemann_R_inverse(law, j)) for j, law in zip(levels, laws)])
    return MixtureState(laws=tuple(laws), length=length, rho=rho, v=np.zeros_like(rho))


def constant_boundary(levels, laws):
    """v̄ = 0 and ρ̄^i = R̃⁻¹(J^i)."""
    return BoundaryConditions(
        vbar=ConstantSignal(0.0),
        rhobar=tuple(ConstantSignal(float(riemann_R_inverse(law, j))) for j, law in zip(levels, laws)),
    )
