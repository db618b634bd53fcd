"""
Scenario files: TOML with SI units in the key names.
"""
import copy
import dataclasses
import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np
import tomli_w

from ..gas.laws import LawKind, PressureLaw
from ..mixture.state import MixtureState, PhysicsParams, cell_centers
from ..oracles.examples import (TravelingWaveSpec, constant_boundary, constant_state,
                                example1_boundary, example1_state, example2_boundary,
                                example2_state)
from ..oracles.stationary import (StationarySpec, shoot_stationary, stationary_profile,
                                  stationary_solution)
from ..solver.boundary import BoundaryConditions, ConstantSignal, signal_from_config
from ..solver.run import Scenario
from ..solver.scheme import Discretization
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

ANALYTIC_FAMILIES = ("example1", "example2", "constant", "stationary")


@dataclasses.dataclass
class ScenarioFile:
    """
    Raw sections of a scenario file. See README.md for the schema.
    """
    physics: dict
    geometry: dict
    grid: dict
    horizon: dict
    components: list
    initial: dict
    boundary: dict
    stationary: dict = dataclasses.field(default_factory=dict)
    name: str = "scenario"

    @classmethod
    def from_dict(cls, data):
        required = ("physics", "geometry", "grid", "horizon", "components", "initial")
        missing = [key for key in required if key not in data]
        if missing:
            raise ConfigError(f"Scenario is missing sections: {', '.join(missing)}")
        return cls(physics=dict(data["physics"]), geometry=dict(data["geometry"]),
                   grid=dict(data["grid"]), horizon=dict(data["horizon"]),
                   components=[dict(c) for c in data["components"]],
                   initial=copy.deepcopy(data["initial"]),
                   boundary=copy.deepcopy(data.get("boundary", {"kind": "analytic"})),
                   stationary=dict(data.get("stationary", {})),
                   name=data.get("name", "scenario"))

    @classmethod
    def loads(cls, text):
        try:
            return cls.from_dict(tomllib.loads(text))
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Invalid scenario TOML: {e}") from e

    @classmethod
    def load(cls, path):
        logger.info(f"Loading scenario: {path}")
        try:
            with open(path, "rb") as f:
                data = tomllib.load(f)
        except OSError as e:
            raise ConfigError(f"Cannot read scenario {path}: {e}") from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Invalid scenario TOML in {path}: {e}") from e
        return cls.from_dict(data)

    def to_dict(self):
        data = {"name": self.name, "physics": self.physics, "geometry": self.geometry,
                "grid": self.grid, "horizon": self.horizon, "components": self.components,
                "initial": self.initial, "boundary": self.boundary}
        if self.stationary:
            data["stationary"] = self.stationary
        return copy.deepcopy(data)

    def dumps(self):
        return tomli_w.dumps(self.to_dict())

    def dump(self, path):
        with open(path, "wb") as f:
            tomli_w.dump(self.to_dict(), f)

    # --- building the simulation objects ---------------------------------

    def _get(self, section, key, cast=float):
        table = getattr(self, section)
        if key not in table:
            raise ConfigError(f"Missing key '{key}' in [{section}]")
        try:
            return cast(table[key])
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Bad value for '{key}' in [{section}]: {e}") from e

    def laws(self):
        if not self.components:
            raise ConfigError("At least one component is required")
        try:
            return tuple(PressureLaw.from_config(c) for c in self.components)
        except KeyError as e:
            raise ConfigError(f"Component law is missing key {e}") from e

    def params(self):
        return PhysicsParams(theta=self._get("physics", "theta_per_m"),
                             omega_bar=self._get("physics", "omega_bar_per_s"))

    @property
    def length(self):
        return self._get("geometry", "length_m")

    def discretization(self):
        return Discretization(cells=self._get("grid", "cells", int),
                              cfl=self._get("grid", "cfl"),
                              t_end=self._get("horizon", "t_end_s"),
                              output_stride=int(self.horizon.get("output_stride", 1)),
                              sonic_tolerance=float(self.grid.get("sonic_tolerance", 1e-2)))

    def stationary_spec(self, shoot=False):
        laws, params, section = self.laws(), self.params(), self.stationary
        if shoot:
            if "outlet_density_kg_per_m3" not in section or "inlet_velocity_m_per_s" not in section:
                raise ConfigError("Shooting needs inlet_velocity_m_per_s and outlet_density_kg_per_m3")
            return shoot_stationary(float(section["inlet_velocity_m_per_s"]),
                                    section["outlet_density_kg_per_m3"], params, laws, self.length,
                                    q_guess=section.get("flow_rates_kg_per_m2_s"))
        if "flow_rates_kg_per_m2_s" not in section:
            raise ConfigError("[stationary] needs flow_rates_kg_per_m2_s")
        q = tuple(float(x) for x in section["flow_rates_kg_per_m2_s"])
        if "inlet_density_kg_per_m3" in section:
            rho = tuple(float(x) for x in section["inlet_density_kg_per_m3"])
            return StationarySpec(q_tilde=q, rho_inlet=rho, params=params, laws=laws)
        return StationarySpec.from_inlet_velocity(q, float(section["inlet_velocity_m_per_s"]), params, laws)

    def _per_component(self, key, n):
        values = np.asarray(self.initial.get(key), dtype=float)
        if values.shape[:1] != (n,):
            raise ConfigError(f"[initial] {key} needs one entry per component ({n})")
        return values

    def initial_state(self):
        laws, length = self.laws(), self.length
        cells = self._get("grid", "cells", int)
        n = len(laws)
        family = self.initial.get("family")
        if family == "uniform":
            rho = self._per_component("density_kg_per_m3", n)
            v = self._per_component("velocity_m_per_s", n)
            state = MixtureState(laws=laws, length=length,
                                 rho=np.repeat(rho[:, None], cells, axis=1),
                                 v=np.repeat(v[:, None], cells, axis=1))
        elif family == "example1":
            state = example1_state(self._per_component("density_kg_per_m3", n), float(self.initial["p0"]),
                                   self.params().theta, 0.0, laws=laws, length=length, cells=cells)
        elif family == "example2":
            state = example2_state(self.wave_spec(), 0.0, length=length, cells=cells)
        elif family == "constant":
            state = constant_state(self._per_component("riemann_levels", n), laws, length, cells)
        elif family == "table":
            x = np.asarray(self.initial["x_m"], dtype=float)
            rho = self._per_component("density_kg_per_m3", n)
            v = self._per_component("velocity_m_per_s", n)
            grid = cell_centers(length, cells)
            state = MixtureState(laws=laws, length=length,
                                 rho=np.array([np.interp(grid, x, r) for r in rho]),
                                 v=np.array([np.interp(grid, x, u) for u in v]))
        elif family == "stationary":
            state = stationary_profile(self.stationary_spec(), length, cells)
        else:
            raise ConfigError(f"Unknown initial family: {family!r}")
        return self._perturb(state)

    def _perturb(self, state):
        """
        Add per-component constant velocity offsets drawn from the seeded
        generator, shifted so that the barycentric velocity is unchanged.
        """
        spec = self.initial.get("perturbation")
        if not spec:
            return state
        amplitude = float(spec.get("amplitude_m_per_s", 0.0))
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        offsets = rng.uniform(-amplitude, amplitude, size=state.n)[:, None] * np.ones_like(state.v)
        offsets -= (state.rho * offsets).sum(axis=0) / state.rho.sum(axis=0)
        perturbed = state.replace(v=state.v + offsets)
        logger.info(f"Perturbed initial velocities, amplitude {amplitude}, seed {spec.get('seed', 0)}")
        return perturbed

    def wave_spec(self):
        laws = self.laws()
        if any(law.kind is not LawKind.ISOTHERMAL_IDEAL for law in laws):
            raise ConfigError("Traveling waves need isothermal components")
        return TravelingWaveSpec(wave_speed=float(self.initial["wave_speed_m_per_s"]),
                                 amplitudes=tuple(float(c) for c in self.initial["amplitudes"]),
                                 sound_speeds=tuple(law.a for law in laws),
                                 theta=self.params().theta)

    def boundary_conditions(self, initial):
        n = initial.n
        if self.boundary.get("kind") == "analytic":
            family = self.initial.get("family")
            if family == "example1":
                return example1_boundary(self._per_component("density_kg_per_m3", n),
                                         float(self.initial["p0"]), self.params().theta)
            if family == "example2":
                return example2_boundary(self.wave_spec(), self.length)
            if family == "constant":
                return constant_boundary(self._per_component("riemann_levels", n), self.laws())
            if family == "stationary":
                spec = self.stationary_spec()
                outlet = stationary_solution(spec, self.length).y[:, -1]
                return BoundaryConditions(vbar=ConstantSignal(spec.inlet_velocity),
                                          rhobar=tuple(ConstantSignal(float(r)) for r in outlet))
            raise ConfigError(f"Analytic boundary needs one of {ANALYTIC_FAMILIES}, got {family!r}")
        if "velocity" not in self.boundary or "density" not in self.boundary:
            raise ConfigError("[boundary] needs a velocity signal and a density signal per component")
        density = self.boundary["density"]
        if len(density) != n:
            raise ConfigError(f"[boundary] needs {n} density signals, got {len(density)}")
        return BoundaryConditions(vbar=signal_from_config(self.boundary["velocity"]),
                                  rhobar=tuple(signal_from_config(s) for s in density))

    def to_scenario(self, snapshot_times=None):
        initial = self.initial_state()
        if snapshot_times is None:
            snapshot_times = self.horizon.get("snapshot_times_s", [])
        return Scenario(initial=initial, params=self.params(), bc=self.boundary_conditions(initial),
                        disc=self.discretization(), snapshot_times=tuple(float(t) for t in snapshot_times),
                        name=self.name)
