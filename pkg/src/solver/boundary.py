"""
Boundary signals, boundary conditions and the C¹-compatibility check.
"""
import dataclasses
import logging
import math
from typing import Callable

import numpy as np

from ..gas.laws import potential_second
from ..mixture.coupling import barycentric_velocity
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ConstantSignal:
    value: float

    def __call__(self, t):
        return self.value

    def derivative(self, t):
        return 0.0

    def to_config(self):
        return {"kind": "constant", "value": self.value}


@dataclasses.dataclass(frozen=True)
class RampSignal:
    """Linear from start to end over [0, duration_s], constant afterwards."""
    start: float
    end: float
    duration_s: float

    def __post_init__(self):
        if not self.duration_s > 0:
            raise ConfigError(f"Ramp duration must be positive, got {self.duration_s}")

    def __call__(self, t):
        s = min(max(t / self.duration_s, 0.0), 1.0)
        return self.start + s * (self.end - self.start)

    def derivative(self, t):
        return (self.end - self.start) / self.duration_s if 0.0 <= t < self.duration_s else 0.0

    def to_config(self):
        return {"kind": "ramp", "start": self.start, "end": self.end, "duration_s": self.duration_s}


@dataclasses.dataclass(frozen=True)
class SinusoidSignal:
    mean: float
    amplitude: float
    period_s: float

    def __post_init__(self):
        if not self.period_s > 0:
            raise ConfigError(f"Sinusoid period must be positive, got {self.period_s}")

    def __call__(self, t):
        return self.mean + self.amplitude * math.sin(2.0 * math.pi * t / self.period_s)

    def derivative(self, t):
        w = 2.0 * math.pi / self.period_s
        return self.amplitude * w * math.cos(w * t)

    def to_config(self):
        return {"kind": "sinusoid", "mean": self.mean, "amplitude": self.amplitude,
                "period_s": self.period_s}


@dataclasses.dataclass(frozen=True)
class TableSignal:
    """Piecewise-linear through (times_s, values), held constant outside."""
    times_s: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.times_s) < 2 or len(self.times_s) != len(self.values):
            raise ConfigError("Table signal needs at least two (time, value) pairs")
        if any(b <= a for a, b in zip(self.times_s, self.times_s[1:])):
            raise ConfigError("Table signal times must be strictly increasing")

    def __call__(self, t):
        return float(np.interp(t, self.times_s, self.values))

    def derivative(self, t):
        times = self.times_s
        if t < times[0] or t >= times[-1]:
            return 0.0
        j = int(np.searchsorted(times, t, side="right")) - 1
        return (self.values[j + 1] - self.values[j]) / (times[j + 1] - times[j])

    def to_config(self):
        return {"kind": "table", "times_s": list(self.times_s), "values": list(self.values)}


@dataclasses.dataclass(frozen=True)
class AnalyticSignal:
    """Trace of a closed-form solution; value and derivative are callables."""
    func: Callable[[float], float]
    deriv: Callable[[float], float]
    label: str = "analytic"

    def __call__(self, t):
        return float(self.func(t))

    def derivative(self, t):
        return float(self.deriv(t))

    def to_config(self):
        return {"kind": "analytic"}


def signal_from_config(config):
    kind = config.get("kind")
    try:
        if kind == "constant":
            return ConstantSignal(float(config["value"]))
        if kind == "ramp":
            return RampSignal(float(config["start"]), float(config["end"]), float(config["duration_s"]))
        if kind == "sinusoid":
            return SinusoidSignal(float(config["mean"]), float(config["amplitude"]), float(config["period_s"]))
        if kind == "table":
            return TableSignal(tuple(float(x) for x in config["times_s"]),
                               tuple(float(x) for x in config["values"]))
    except KeyError as e:
        raise ConfigError(f"Boundary signal of kind {kind!r} is missing key {e}") from e
    raise ConfigError(f"Unknown boundary signal kind: {kind!r}")


@dataclasses.dataclass(frozen=True)
class BoundaryConditions:
    """
    vbar: common inflow velocity v̄(t) at x = 0.
    rhobar: outflow densities ρ̄^i(t) at x = L, one signal per component.
    """
    vbar: object
    rhobar: tuple

    def __post_init__(self):
        object.__setattr__(self, "rhobar", tuple(self.rhobar))

    def validate(self, t_end, samples=64):
        """
        Sample the signals on [0, t_end]. Non-positive densities are a config
        error; a non-positive v̄ is allowed and only logged.
        """
        times = np.linspace(0.0, t_end, samples) if t_end > 0 else np.zeros(1)
        for i, signal in enumerate(self.rhobar):
            if min(signal(t) for t in times) <= 0:
                raise ConfigError(f"Outflow density of component {i} must stay positive")
        if min(self.vbar(t) for t in times) <= 0:
            logger.warning("Inflow velocity v̄(t) is not positive on the whole horizon")


@dataclasses.dataclass
class CompatibilityReport:
    """Residuals of the order-0 and order-1 compatibility conditions, per component."""
    velocity_order0: list
    density_order0: list
    velocity_order1: list
    density_order1: list
    tolerance: float

    @property
    def max_residual(self):
        return max(abs(r) for r in (self.velocity_order0 + self.density_order0
                                    + self.velocity_order1 + self.density_order1))

    @property
    def passed(self):
        return self.max_residual <= self.tolerance

    def to_dict(self):
        out = dataclasses.asdict(self)
        out["passed"] = self.passed
        return out


def check_c1_compatibility(state0, bc, params, tolerance=1e-6):
    """
    Evaluate the compatibility of the initial state with the boundary signals
    at t = 0, using boundary cell values and one-sided differences.
    """
    dx = state0.dx
    v_bary = barycentric_velocity(state0)
    vel0, rho0, vel1, rho1 = [], [], [], []
    for i, law in enumerate(state0.laws):
        rho = state0.rho[i]
        v = state0.v[i]
        rho_x = np.gradient(rho, dx)
        v_x = np.gradient(v, dx)
        q_x = np.gradient(rho * v, dx)
        vel0.append(float(v[0] - bc.vbar(0.0)))
        rho0.append(float(rho[-1] - bc.rhobar[i](0.0)))
        rho1.append(float(bc.rhobar[i].derivative(0.0) + q_x[-1]))
        # v^i_t at x_B from the momentum equation in velocity form
        flux_x = v[0] * v_x[0] + potential_second(law, rho[0]) * rho_x[0]
        source = 0.5 * params.theta * v[0] * abs(v[0]) + params.omega_bar * (v[0] - v_bary[0])
        vel1.append(float(bc.vbar.derivative(0.0) + flux_x + source))
    report = CompatibilityReport(vel0, rho0, vel1, rho1, tolerance)
    if report.passed:
        logger.info("Initial and boundary data are C1-compatible.")
    else:
        logger.warning(f"C1-compatibility residual {report.max_residual:.3e} exceeds {tolerance:.1e}")
    return report
