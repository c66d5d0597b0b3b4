"""Passive transport d_t f + v.grad f = g and the linear-growth probe for B^0 norms."""

import math

import numpy as np
import pandas as pd
from tqdm import tqdm

from fields.calculus import advect, lp_norm, perp_gradient, velocity_gradient_sup
from fields.grid import GridSpec, ScalarField, VectorField
from littlewood_paley.besov import BesovIndex, besov_norm


def swirl_velocity(grid: GridSpec) -> VectorField:
    """Periodic swirl (-sin y, sin x), a rigid rotation near the origin."""
    psi = ScalarField.from_function(grid, lambda x, y: -np.cos(x) - np.cos(y))
    return perp_gradient(psi)


def _provider(source):
    if source is None or callable(source):
        return source
    return lambda t: source


def solve_linear_transport(velocity, f0: ScalarField, forcing=None, t_end: float = 1.0, dt: float = 1e-2,
                           record_every: int = 1, show_progress: bool = False) -> list:
    """
    RK4 integration of the linear transport equation.

    Parameters:
    velocity (callable | VectorField): t -> divergence-free VectorField, or a steady field.
    f0 (ScalarField): initial datum.
    forcing (callable | ScalarField | None): t -> ScalarField source term g.
    t_end (float): final time.
    dt (float): time step.
    record_every (int): steps between stored snapshots.

    Returns:
    list: (t, ScalarField) pairs, starting with (0, f0) and ending at t_end.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    velocity = _provider(velocity)
    forcing = _provider(forcing)

    def rate(t, f):
        tendency = -advect(velocity(t), f)
        return tendency + forcing(t) if forcing is not None else tendency

    n_steps = int(round(t_end / dt))
    f = f0
    trajectory = [(0.0, f0)]
    for step in tqdm(range(1, n_steps + 1), desc="Transport", disable=not show_progress):
        t = (step - 1) * dt
        k1 = rate(t, f)
        k2 = rate(t + dt / 2, f + k1 * (dt / 2))
        k3 = rate(t + dt / 2, f + k2 * (dt / 2))
        k4 = rate(t + dt, f + k3 * dt)
        f = f + (k1 + 2 * k2 + 2 * k3 + k4) * (dt / 6)
        if step % record_every == 0 or step == n_steps:
            trajectory.append((step * dt, f))
    return trajectory


def vishik_growth_probe(bank, f0: ScalarField, velocity, t_end: float = 20.0, dt: float = 1e-2,
                        s_values=(0.0, 0.5), record_every: int = 10) -> pd.DataFrame:
    """
    ||f(t)||_{B^s_{inf,1}} / (||f0||_{B^s_{inf,1}} (1 + int_0^t ||grad v||_inf)) along a transport run.

    For s = 0 the ratio stays bounded (linear growth); for s > 0 growth is
    exponential in the Lipschitz integral, up to the grid's resolving power.

    Returns:
    pd.DataFrame: columns t, lipschitz_integral, sup_norm, departure (relative L2 distance
    from f0) and ratio_s<s> per regularity.
    """
    velocity = _provider(velocity)
    trajectory = solve_linear_transport(velocity, f0, None, t_end, dt, record_every=1)
    indices = {s: BesovIndex(s, math.inf, 1.0) for s in s_values}
    initial = {s: besov_norm(bank, f0, idx) for s, idx in indices.items()}
    f0_l2 = lp_norm(f0, 2)

    rows = []
    integral = 0.0
    previous = velocity_gradient_sup(velocity(0.0))
    for step, (t, f) in enumerate(trajectory):
        if step > 0:
            current = velocity_gradient_sup(velocity(t))
            integral += 0.5 * dt * (previous + current)
            previous = current
        if step % record_every and step != len(trajectory) - 1:
            continue
        row = {
            "t": t,
            "lipschitz_integral": integral,
            "sup_norm": lp_norm(f, math.inf),
            "departure": lp_norm(f - f0, 2) / f0_l2 if f0_l2 > 0 else 0.0,
        }
        for s, idx in indices.items():
            row[f"ratio_s{s:g}"] = besov_norm(bank, f, idx) / (initial[s] * (1 + integral)) if initial[s] > 0 else 0.0
        rows.append(row)
    return pd.DataFrame(rows)
