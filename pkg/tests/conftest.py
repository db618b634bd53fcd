import numpy as np
import pytest

from src.gas.laws import PressureLaw
from src.mixture.state import MixtureState, PhysicsParams
from src.solver.boundary import BoundaryConditions, ConstantSignal
from src.solver.run import Scenario
from src.solver.scheme import Discretization

SYNC_TOML = """
name = "sync"

[physics]
theta_per_m = 0.1
omega_bar_per_s = {omega_bar}

[geometry]
length_m = 1.0

[grid]
cells = {cells}
cfl = 0.9

[horizon]
t_end_s = {t_end}
output_stride = 1

[[components]]
law = "isothermal"
sound_speed_m_per_s = 1.0

[[components]]
law = "isothermal"
sound_speed_m_per_s = 1.0

[initial]
family = "uniform"
density_kg_per_m3 = [1.0, 1.0]
velocity_m_per_s = [0.2, 0.4]

[boundary]
velocity = {{ kind = "constant", value = 0.3 }}
density = [{{ kind = "constant", value = 1.0 }}, {{ kind = "constant", value = 1.0 }}]
"""


def sync_toml(omega_bar=20.0, cells=128, t_end=2.0):
    return SYNC_TOML.format(omega_bar=omega_bar, cells=cells, t_end=t_end)


def sync_scenario(omega_bar=20.0, cells=128, t_end=2.0):
    """Two identical isothermal components started at v = (0.2, 0.4) with inflow v̄ = 0.3."""
    laws = (PressureLaw.isothermal(1.0), PressureLaw.isothermal(1.0))
    rho = np.ones((2, cells))
    v = np.vstack([np.full(cells, 0.2), np.full(cells, 0.4)])
    initial = MixtureState(laws=laws, length=1.0, rho=rho, v=v)
    bc = BoundaryConditions(vbar=ConstantSignal(0.3), rhobar=(ConstantSignal(1.0), ConstantSignal(1.0)))
    return Scenario(initial=initial, params=PhysicsParams(theta=0.1, omega_bar=omega_bar), bc=bc,
                    disc=Discretization(cells=cells, cfl=0.9, t_end=t_end), name="sync")


def random_state(rng, n, cells=1000):
    """Independent random admissible states, one per cell."""
    laws = tuple(PressureLaw.isothermal(a) for a in rng.uniform(0.5, 3.0, size=n))
    rho = rng.uniform(0.1, 10.0, size=(n, cells))
    v = rng.uniform(-5.0, 5.0, size=(n, cells))
    return MixtureState(laws=laws, length=1.0, rho=rho, v=v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def sync_trajectory():
    from src.solver.run import run
    scenario = sync_scenario()
    return scenario, run(scenario)
