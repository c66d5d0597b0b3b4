"""Explicit RK4 step for (rho, u) with a pressure solve at every stage."""

import logging

from dynamics.state import DIVERGENCE_TOL, DRIFT_TOL, FluidState, InvariantViolation, SimConfig
from dynamics.tendencies import momentum_tendency
from fields.calculus import advect, divergence, leray_project, lp_norm

logger = logging.getLogger(__name__)


def check_invariants(state: FluidState, density_bounds: tuple):
    """
    Enforce the maximum principle for rho and the divergence constraint on u.

    Parameters:
    state (FluidState): state to check.
    density_bounds (tuple): (rho_lower, rho_upper) of the initial density.
    """
    rho_lower, rho_upper = density_bounds
    rho_min, rho_max = state.rho.min(), state.rho.max()
    if rho_min < rho_lower * (1 - DRIFT_TOL):
        raise InvariantViolation(
            f"t={state.t:.6g}: rho_min={rho_min:.12g} dropped below rho_lower={rho_lower:.12g}", "rho_min", rho_min
        )
    if rho_max > rho_upper * (1 + DRIFT_TOL):
        raise InvariantViolation(
            f"t={state.t:.6g}: rho_max={rho_max:.12g} exceeded rho_upper={rho_upper:.12g}", "rho_max", rho_max
        )
    div_norm = lp_norm(divergence(state.u), 2)
    if div_norm > DIVERGENCE_TOL * lp_norm(state.u, 2):
        raise InvariantViolation(f"t={state.t:.6g}: ||div u|| = {div_norm:.3e}", "divergence", div_norm)


def _rates(rho, u, config: SimConfig) -> tuple:
    du, _ = momentum_tendency(rho, u, config)
    return -advect(u, rho), du


def step_rk4(state: FluidState, config: SimConfig, density_bounds: tuple = None) -> FluidState:
    """
    Advance (rho, u) by config.dt.

    The velocity is Leray-projected after the update; the returned state
    carries no pressure gradient (see dynamics.tendencies.attach_pressure).
    """
    dt = config.dt
    rho, u = state.rho, state.u
    r1, k1 = _rates(rho, u, config)
    r2, k2 = _rates(rho + r1 * (dt / 2), u + k1 * (dt / 2), config)
    r3, k3 = _rates(rho + r2 * (dt / 2), u + k2 * (dt / 2), config)
    r4, k4 = _rates(rho + r3 * dt, u + k3 * dt, config)

    new_rho = rho + (r1 + 2 * r2 + 2 * r3 + r4) * (dt / 6)
    new_u = leray_project(u + (k1 + 2 * k2 + 2 * k3 + k4) * (dt / 6))
    new_state = FluidState(state.t + dt, new_rho, new_u)
    check_invariants(new_state, density_bounds or (rho.min(), rho.max()))
    return new_state
