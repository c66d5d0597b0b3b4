"""
Initial-condition presets for the velocity and the density.

Velocity presets are divergence-free and mean-zero; density presets are
band-limited and optionally clamped to [rho_lower, rho_upper].
"""

import numpy as np

from fields.calculus import dealias, leray_project, lp_norm, perp_gradient
from fields.grid import GridSpec, ScalarField, VectorField, random_field
from littlewood_paley.besov import dyadic_block
from littlewood_paley.filter_bank import build_filter_bank
from littlewood_paley.inequalities import periodic_bump

VELOCITY_PRESETS = ("taylor_green", "random_shell", "zero")
DENSITY_PRESETS = ("constant", "single_mode", "gaussian_bump")


def taylor_green(grid: GridSpec, amplitude: float = 1.0) -> VectorField:
    x, y = grid.coordinates
    return VectorField.from_arrays(
        grid,
        amplitude * np.sin(x) * np.cos(y),
        -amplitude * np.cos(x) * np.sin(y),
        divergence_free=True,
    )


def random_shell(grid: GridSpec, j: int = 2, amplitude: float = 1.0, seed: int = 0) -> VectorField:
    """Divergence-free field whose stream function lives in dyadic block j, scaled to L2 norm amplitude."""
    bank = build_filter_bank(grid)
    if not 0 <= j <= bank.j_max:
        raise ValueError(f"random_shell block j must lie in [0, {bank.j_max}], got {j}")
    psi = dyadic_block(bank, random_field(grid, np.random.default_rng(seed)), j)
    u = leray_project(dealias(perp_gradient(psi)))
    norm = lp_norm(u, 2)
    if norm == 0:
        raise ValueError(f"random_shell produced an empty field for j={j}")
    return leray_project(u * (amplitude / norm))


def constant_density(grid: GridSpec, value: float = 1.0) -> ScalarField:
    return ScalarField.constant(grid, value)


def single_mode(grid: GridSpec, k=(1, 0), amplitude: float = 0.2, mean: float = 1.0) -> ScalarField:
    x, y = grid.coordinates
    return ScalarField(grid, mean + amplitude * np.cos(k[0] * x + k[1] * y))


def gaussian_bump(grid: GridSpec, width: float = 0.5, amplitude: float = 0.2, mean: float = 1.0) -> ScalarField:
    return dealias(periodic_bump(grid, width, amplitude)) + mean


def build_velocity(grid: GridSpec, preset: str, params: dict = None, seed: int = 0) -> VectorField:
    params = dict(params or {})
    try:
        if preset == "taylor_green":
            return taylor_green(grid, **params)
        elif preset == "random_shell":
            return random_shell(grid, seed=seed, **params)
        elif preset == "zero":
            return VectorField.zeros(grid, **params)
    except TypeError as e:
        raise ValueError(f"bad parameters for velocity preset {preset!r}: {e}") from e
    raise ValueError(f"unknown velocity preset {preset!r}, expected one of {VELOCITY_PRESETS}")


def build_density(grid: GridSpec, preset: str, params: dict = None) -> ScalarField:
    params = dict(params or {})
    lower = params.pop("rho_lower", None)
    upper = params.pop("rho_upper", None)
    try:
        if preset == "constant":
            rho = constant_density(grid, **params)
        elif preset == "single_mode":
            rho = single_mode(grid, **params)
        elif preset == "gaussian_bump":
            rho = gaussian_bump(grid, **params)
        else:
            raise ValueError(f"unknown density preset {preset!r}, expected one of {DENSITY_PRESETS}")
    except TypeError as e:
        raise ValueError(f"bad parameters for density preset {preset!r}: {e}") from e
    if lower is not None or upper is not None:
        rho = ScalarField(grid, np.clip(rho.values, lower, upper))
    if rho.min() <= 0:
        raise ValueError(f"density preset {preset!r} has vacuum: min rho = {rho.min():.3e}")
    return rho
