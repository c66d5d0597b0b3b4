"""
Right-hand sides of the damped non-homogeneous Euler system and its rescaled views.

The momentum equation is used in the form obtained after dividing by rho:
    d_t u = -u.grad u - (1/rho) grad Pi - alpha rho^(gamma-1) u,
with grad Pi chosen so that the tendency stays divergence-free.
"""

import math

from dynamics.state import FluidState, SimConfig
from elliptic.pressure import PressureSolution, solve_pressure
from fields.calculus import advect, advect_vector, curl2d, dealias, perp_gradient, product
from fields.grid import ScalarField, VectorField


def damped_velocity(rho: ScalarField, u: VectorField, alpha: float, gamma: int) -> VectorField:
    """alpha rho^(gamma-1) u, dealiased."""
    if gamma == 1:
        return u * alpha
    coefficient = alpha / rho
    return VectorField(tuple(product(coefficient, c) for c in u))


def momentum_flux(rho: ScalarField, u: VectorField, config: SimConfig) -> VectorField:
    """F = u.grad u + alpha rho^(gamma-1) u."""
    return advect_vector(u, u) + damped_velocity(rho, u, config.alpha, config.gamma)


def momentum_tendency(rho: ScalarField, u: VectorField, config: SimConfig) -> tuple:
    F = momentum_flux(rho, u, config)
    solution = solve_pressure(rho, F, config.pressure)
    tendency = dealias(-(F + solution.gradPi * (1.0 / rho)))
    return tendency, solution


def momentum_rhs(state: FluidState, config: SimConfig) -> VectorField:
    tendency, _ = momentum_tendency(state.rho, state.u, config)
    return tendency


def density_rhs(state: FluidState) -> ScalarField:
    return -advect(state.u, state.rho)


def pressure_at(state: FluidState, config: SimConfig) -> PressureSolution:
    return solve_pressure(state.rho, momentum_flux(state.rho, state.u, config), config.pressure)


def attach_pressure(state: FluidState, config: SimConfig) -> FluidState:
    """Fill the grad Pi cache of a state with a fresh pressure solve."""
    return state.with_pressure(pressure_at(state, config).gradPi)


def _require_pressure(state: FluidState):
    if state.gradPi is None:
        raise ValueError("state has no pressure gradient; call attach_pressure first")


def rescaled_view(state: FluidState, alpha: float, beta: float = None) -> tuple:
    """
    (e^(beta t) u, e^(beta t) grad Pi).

    Parameters:
    state (FluidState): state with its pressure gradient attached.
    alpha (float): damping coefficient; the default beta = alpha gives the fully rescaled unknowns.
    beta (float): rescaling rate, >= 0.
    """
    beta = alpha if beta is None else beta
    if beta < 0:
        raise ValueError(f"rescaling rate beta must be >= 0, got {beta}")
    _require_pressure(state)
    factor = math.exp(beta * state.t)
    return state.u * factor, state.gradPi * factor


def rescaled_vorticity(state: FluidState, alpha: float) -> ScalarField:
    return curl2d(state.u) * math.exp(alpha * state.t)


def vorticity_forcing(state: FluidState, alpha: float) -> ScalarField:
    """
    Right-hand side of the planar vorticity equation for the rescaled unknowns,
    -grad_perp(1/rho) . grad Pi~ with Pi~ = e^(alpha t) Pi. Vanishes for constant rho.
    """
    _require_pressure(state)
    perp = perp_gradient(1.0 / state.rho)
    factor = math.exp(alpha * state.t)
    total = sum(p.values * g.values for p, g in zip(perp, state.gradPi))
    return -dealias(ScalarField(state.rho.grid, factor * total))
