import numpy as np
import pytest

from conftest import random_state
from src.diagnostics.energy import energy_densities, lyapunov
from src.gas.laws import PressureLaw
from src.mixture.coupling import (barycentric_velocity, coupling_terms, deviations,
                                  hamiltonian_source, kinetic_decomposition_residual,
                                  mass_fractions, source_vartheta, total_density, weighted_deviation_sum)
from src.mixture.state import MixtureState, PhysicsParams, RiemannField
from src.utils.errors import ConfigError, DomainError


def point_state(rho, v, laws=None):
    rho = np.asarray(rho, dtype=float)[:, None]
    v = np.asarray(v, dtype=float)[:, None]
    if laws is None:
        laws = tuple(PressureLaw.isothermal(1.0) for _ in range(rho.shape[0]))
    return MixtureState(laws=laws, length=1.0, rho=rho, v=v)


def test_barycentric_velocity_examples():
    assert barycentric_velocity(point_state([1, 1], [2, 4]), 0) == 3.0
    assert barycentric_velocity(point_state([3, 1], [0, 4]), 0) == 1.0
    assert barycentric_velocity(point_state([0.7], [5.0]), 0) == pytest.approx(5.0)


def test_deviations_examples():
    np.testing.assert_allclose(deviations(point_state([1, 1], [2, 4]), 0), [-1.0, 1.0])
    state = point_state([1, 2, 1], [1, 2, 3])
    np.testing.assert_allclose(deviations(state, 0), [-1.0, 0.0, 1.0])
    assert weighted_deviation_sum(state, 0) == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(deviations(point_state([1, 2, 3], [0.4, 0.4, 0.4]), 0), 0.0, atol=1e-15)


def test_coupling_terms_examples():
    state = point_state([1, 1], [-1, 1])
    np.testing.assert_allclose(coupling_terms(state, PhysicsParams(0.0, 2.0), 0), [-2.0, 2.0])
    state = point_state([1, 2, 1], [1, 2, 3])
    np.testing.assert_allclose(coupling_terms(state, PhysicsParams(0.0, 5.0), 0), [-5.0, 0.0, 5.0])
    state = point_state([1, 4], [0.3, 0.3])
    np.testing.assert_allclose(coupling_terms(state, PhysicsParams(1.0, 7.0), 0), 0.0, atol=1e-14)


def test_source_vartheta_examples():
    at_rest = point_state([1, 2], [0, 0])
    np.testing.assert_array_equal(source_vartheta(at_rest, PhysicsParams(0.3, 4.0), 0), 0.0)
    np.testing.assert_allclose(source_vartheta(point_state([1, 1], [-1, 1]), PhysicsParams(0.0, 1.0), 0),
                               [-1.0, 1.0])
    single = point_state([2.0], [1.0])
    assert source_vartheta(single, PhysicsParams(8.0, 1.0), 0)[0] == pytest.approx(4.0)


def test_mass_fractions_sum_to_one(rng):
    state = random_state(rng, 3, cells=50)
    np.testing.assert_allclose(mass_fractions(state).sum(axis=0), 1.0)
    np.testing.assert_allclose(mass_fractions(state) * total_density(state), state.rho)


def test_total_density_sums_components():
    state = point_state([1.0, 2.5, 0.5], [0.0, 1.0, 2.0])
    assert total_density(state, 0) == 4.0
    assert total_density(state).shape == (1,)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_algebraic_identities_on_random_states(rng, n):
    state = random_state(rng, n)
    params = PhysicsParams(theta=0.7, omega_bar=3.0)
    scale = (state.rho * np.abs(state.v)).sum(axis=0)
    assert np.all(np.abs(weighted_deviation_sum(state)) <= 1e-12 * scale)

    coupling = coupling_terms(state, params)
    assert np.all(np.abs(coupling.sum(axis=0)) <= 1e-12 * params.omega_bar * scale)

    kinetic = (state.rho * state.v ** 2).sum(axis=0)
    assert np.all(np.abs(kinetic_decomposition_residual(state)) <= 1e-12 * kinetic)

    u = deviations(state)
    left = (state.rho * state.v * u).sum(axis=0)
    right = (state.rho * u ** 2).sum(axis=0)
    assert np.all(np.abs(left - right) <= 1e-12 * kinetic)

    np.testing.assert_allclose(source_vartheta(state, params), hamiltonian_source(state, params),
                               rtol=1e-12, atol=1e-12 * float(np.max(np.abs(hamiltonian_source(state, params)))))


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_energy_identity_on_random_states(rng, n):
    state = random_state(rng, n)
    total, mix = energy_densities(state)
    residual = abs(np.sum(total - mix) * state.dx - lyapunov(state))
    magnitude = np.sum(np.abs(total)) * state.dx
    assert residual <= 1e-12 * magnitude
    if n == 1:
        assert lyapunov(state) <= 1e-25


def test_riemann_field_round_trip(rng):
    state = random_state(rng, 2, cells=20)
    field = state.to_riemann()
    assert isinstance(field, RiemannField)
    back = field.to_state()
    np.testing.assert_allclose(back.rho, state.rho, rtol=1e-13)
    np.testing.assert_allclose(back.v, state.v, atol=1e-13)


def test_state_validation():
    laws = (PressureLaw.isothermal(1.0),)
    with pytest.raises(DomainError):
        MixtureState(laws=laws, length=1.0, rho=[[1.0, 0.0]], v=[[0.0, 0.0]])
    with pytest.raises(ConfigError):
        MixtureState(laws=laws, length=1.0, rho=[[1.0, 1.0]], v=[[0.0]])
    with pytest.raises(ConfigError):
        PhysicsParams(theta=0.1, omega_bar=0.0)
    with pytest.raises(ConfigError):
        PhysicsParams(theta=-0.1, omega_bar=1.0)


def test_grid_is_cell_centred():
    state = MixtureState(laws=(PressureLaw.isothermal(1.0),), length=2.0, rho=np.ones((1, 4)), v=np.zeros((1, 4)))
    assert state.dx == 0.5
    np.testing.assert_allclose(state.grid, [0.25, 0.75, 1.25, 1.75])
