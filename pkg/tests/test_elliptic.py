import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import seeds
from elliptic.oracle import direct_pressure_solve
from elliptic.pressure import (
    CoefficientBounds,
    PressureSolveError,
    PressureSolveParams,
    lax_milgram_check,
    pressure_estimate_ratio,
    solve_pressure,
    variable_coefficient_operator,
)
from fields.calculus import divergence, gradient, lp_norm
from fields.grid import GridSpec, ScalarField, VectorField, random_field, random_vector_field
from littlewood_paley.filter_bank import build_filter_bank


def cosine_density(grid, amplitude=0.2):
    return ScalarField.from_function(grid, lambda x, y: 1 + amplitude * np.cos(x))


def max_abs(f) -> float:
    return lp_norm(f, math.inf)


def test_params_validated():
    with pytest.raises(ValueError, match="pressure.tol"):
        PressureSolveParams(tol=0)
    with pytest.raises(ValueError, match="pressure.max_iter"):
        PressureSolveParams(max_iter=0)


def test_coefficient_bounds(grid32):
    bounds = CoefficientBounds.from_density(cosine_density(grid32, 0.5))
    assert bounds.a_star == pytest.approx(1 / 1.5)
    assert bounds.a_upper == pytest.approx(1 / 0.5)
    assert bounds.midpoint == pytest.approx(0.5 * (1 / 1.5 + 2.0))
    assert bounds.contraction_factor == pytest.approx(0.5)


def test_vacuum_rejected(grid32):
    rho = ScalarField.from_function(grid32, lambda x, y: np.cos(x))
    with pytest.raises(ValueError, match="density"):
        solve_pressure(rho, VectorField.zeros(grid32))


def test_divergence_free_flux_gives_no_pressure(grid64):
    x, y = grid64.coordinates
    F = VectorField.from_arrays(grid64, np.sin(x) * np.cos(y), -np.cos(x) * np.sin(y))
    solution = solve_pressure(ScalarField.constant(grid64, 1.0), F)
    assert solution.iterations == 1
    assert max_abs(solution.gradPi.magnitude()) < 1e-12
    assert lax_milgram_check(ScalarField.constant(grid64, 1.0), F, solution.gradPi) < 1e-12


def test_gradient_flux_inverts_exactly(grid64, rng):
    g = random_field(grid64, rng, k_cut=8)
    F = gradient(g)
    rho = ScalarField.constant(grid64, 1.0)
    solution = solve_pressure(rho, F)
    assert abs(solution.Pi.mean()) < 1e-12
    assert max_abs(solution.Pi + g) < 1e-10
    assert max_abs((solution.gradPi + F).magnitude()) < 1e-10
    assert lax_milgram_check(rho, F, solution.gradPi) == pytest.approx(1.0, abs=1e-10)


def test_variable_density_residual_and_gauge(grid64, rng):
    rho = cosine_density(grid64)
    F = random_vector_field(grid64, rng, k_cut=8)
    solution = solve_pressure(rho, F)
    assert abs(solution.Pi.mean()) < 1e-12
    residual = variable_coefficient_operator(rho, solution.Pi) - divergence(F)
    assert lp_norm(residual, 2) <= 1e-10 * lp_norm(divergence(F), 2) * 1.0000001
    assert solution.residual <= 1e-10
    assert solution.iterations <= 50


def test_residual_history_decreases(grid64, rng):
    solution = solve_pressure(cosine_density(grid64), random_vector_field(grid64, rng, k_cut=6))
    assert np.all(np.diff(solution.residual_history) < 0)


def test_contrast_two_converges_quickly(grid64, rng):
    rho = cosine_density(grid64, amplitude=1 / 3)
    assert rho.max() / rho.min() == pytest.approx(2.0)
    solution = solve_pressure(rho, random_vector_field(grid64, rng, k_cut=6))
    assert solution.residual <= 1e-10
    assert solution.iterations <= 50


def test_non_convergence_raises(grid64, rng):
    rho = cosine_density(grid64, amplitude=0.6)
    F = random_vector_field(grid64, rng, k_cut=6)
    with pytest.raises(PressureSolveError) as error:
        solve_pressure(rho, F, PressureSolveParams(max_iter=1))
    assert error.value.iterations == 1
    assert error.value.residual > 1e-10


def test_adding_a_gradient_shifts_pressure(grid64, rng):
    rho = ScalarField.constant(grid64, 1.0)
    F = random_vector_field(grid64, rng, k_cut=6)
    g = random_field(grid64, rng, k_cut=6)
    base = solve_pressure(rho, F).gradPi
    shifted = solve_pressure(rho, F + gradient(g)).gradPi
    assert max_abs((shifted - base + gradient(g)).magnitude()) < 1e-10


def test_lax_milgram_rejects_inconsistent_pressure(grid32):
    rho = ScalarField.constant(grid32, 1.0)
    gradPi = gradient(ScalarField.from_function(grid32, lambda x, y: np.sin(x)))
    with pytest.raises(ValueError, match="inconsistent"):
        lax_milgram_check(rho, VectorField.zeros(grid32), gradPi)


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_lax_milgram_bound(seed):
    grid = GridSpec(n=32)
    rng = np.random.default_rng(seed)
    bump = random_field(grid, rng, k_cut=4)
    rho = 1.0 + 0.2 * bump / max_abs(bump)
    F = random_vector_field(grid, rng, k_cut=8)
    solution = solve_pressure(rho, F)
    assert lax_milgram_check(rho, F, solution.gradPi) <= 1 + 1e-8


def test_agrees_with_dense_solve():
    grid = GridSpec(n=16)
    rho = cosine_density(grid)
    F = random_vector_field(grid, np.random.default_rng(5))
    iterative = solve_pressure(rho, F)
    Pi, gradPi = direct_pressure_solve(rho, F)
    assert max_abs((iterative.gradPi - gradPi).magnitude()) < 1e-8
    assert max_abs(iterative.Pi - Pi) < 1e-8


def test_dense_solve_refuses_large_grids(grid64):
    with pytest.raises(ValueError, match="dense"):
        direct_pressure_solve(ScalarField.constant(grid64, 1.0), VectorField.zeros(grid64))


def test_pressure_estimate_ratio_is_reported(grid64, rng):
    bank = build_filter_bank(grid64)
    rho = cosine_density(grid64)
    ratios = []
    for _ in range(3):
        F = random_vector_field(grid64, rng, k_cut=6)
        ratios.append(pressure_estimate_ratio(bank, rho, F, solve_pressure(rho, F).gradPi))
    assert all(0 < r < math.inf for r in ratios)
    zero = VectorField.zeros(grid64)
    assert pressure_estimate_ratio(bank, rho, zero, zero) == 0.0
