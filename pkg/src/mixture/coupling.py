"""
Barycentric quantities and the source terms of the diagonal system.

Every function takes an optional cell index k; without it the quantity is
returned for the whole grid (component axis first).
"""
import numpy as np


def _at(array, k):
    return array if k is None else array[..., k]


def total_density(state, k=None):
    """ρ = Σ_i ρ^i."""
    return _at(state.rho.sum(axis=0), k)


def mass_fractions(state, k=None):
    """λ_i = ρ^i/ρ."""
    return _at(state.rho / total_density(state), k)


def barycentric_velocity(state, k=None):
    """v = Σ_i (ρ^i/ρ) v^i."""
    return _at((state.rho * state.v).sum(axis=0) / total_density(state), k)


def deviations(state, k=None):
    """u^i = v^i − v."""
    return _at(state.v - barycentric_velocity(state), k)


def coupling_terms(state, params, k=None):
    """Ḡ^i = Ω̄ ρ^i u^i; sums to zero over the components."""
    return _at(params.omega_bar * state.rho * deviations(state), k)


def friction_riemann(theta, r_plus, r_minus):
    """(θ/8)|R₊−R₋|(R₊−R₋), the friction part of ϑ_i."""
    diff = np.asarray(r_plus) - np.asarray(r_minus)
    return theta / 8.0 * np.abs(diff) * diff


def source_vartheta(state, params, k=None, field=None):
    """
    ϑ_i = (θ/8)|R₊^i−R₋^i|(R₊^i−R₋^i) + Ḡ^i/ρ^i in Riemann variables.

    The diagonal source is S^e = (−ϑ_1, +ϑ_1, ..., −ϑ_n, +ϑ_n). The coupling
    part is the momentum exchange Ω̄ρ^i u^i divided by the density
    ρ^i = R̃⁻¹((R₊^i+R₋^i)/2), i.e. Ω̄u^i, matching the velocity equation.
    """
    if field is None:
        field = state.to_riemann()
    friction = friction_riemann(params.theta, field.r_plus, field.r_minus)
    relax = coupling_terms(state, params) / state.rho
    return _at(friction + relax, k)


def hamiltonian_source(state, params, k=None):
    """(θ/2) v^i|v^i| + Ω̄ u^i, the velocity-equation form of the same source."""
    return _at(0.5 * params.theta * state.v * np.abs(state.v)
               + params.omega_bar * deviations(state), k)


def weighted_deviation_sum(state, k=None):
    """Σ_i ρ^i u^i, zero up to rounding."""
    return _at((state.rho * deviations(state)).sum(axis=0), k)


def kinetic_decomposition_residual(state, k=None):
    """
    Σ_i ρ^i (v^i)² − (ρv² + Σ_i ρ^i (u^i)²) per cell.
    """
    rho = state.rho.sum(axis=0)
    v = barycentric_velocity(state)
    u = deviations(state)
    left = (state.rho * state.v ** 2).sum(axis=0)
    right = rho * v ** 2 + (state.rho * u ** 2).sum(axis=0)
    return _at(left - right, k)
