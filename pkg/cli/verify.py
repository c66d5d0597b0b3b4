"""
Self-verification suite behind `simulate.py verify`.

Each check yields one row (check, n, value, threshold, passed); the quick
level runs at N=64, the full level adds N=128 and the dense pressure
oracle at N=16.
"""

import logging
import math

import numpy as np
import pandas as pd

from diagnostics.monitors import energy_balance_residual
from dynamics.initial_conditions import single_mode, taylor_green
from dynamics.simulation import Simulation
from dynamics.state import InitialCondition, SimConfig
from elliptic.oracle import direct_pressure_solve
from elliptic.pressure import PressureSolveError, lax_milgram_check, solve_pressure
from fields.calculus import dealias, lp_norm
from fields.grid import GridSpec, ScalarField, random_field, random_vector_field
from littlewood_paley.filter_bank import build_filter_bank
from littlewood_paley.inequalities import bernstein_ratios, block_orthogonality_residual, partition_residual
from littlewood_paley.paraproduct import paraproduct, remainder

logger = logging.getLogger(__name__)

LEVELS = ("quick", "full")

PARTITION_TOL = 1e-13
ORTHOGONALITY_TOL = 1e-12
BONY_TOL = 1e-10
BERNSTEIN_BOUND = 8.0
LAX_MILGRAM_TOL = 1e-8
TAYLOR_GREEN_TOL = 1e-9
ENERGY_TOL = 1e-5
ORACLE_TOL = 1e-8


def _row(check: str, n: int, value: float, threshold: float) -> dict:
    value = float(value)
    return {"check": check, "n": n, "value": value, "threshold": threshold, "passed": bool(value <= threshold)}


def bony_residual(bank, pairs: int, seed: int = 0) -> float:
    """Worst relative residual of uv - T_u v - T_v u - R(u, v) over random pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        u = random_field(bank.grid, rng)
        v = random_field(bank.grid, rng)
        uv = dealias(ScalarField(bank.grid, u.values * v.values))
        residual = uv - paraproduct(bank, u, v) - paraproduct(bank, v, u) - remainder(bank, u, v)
        worst = max(worst, lp_norm(residual, math.inf) / (lp_norm(u, math.inf) * lp_norm(v, math.inf)))
    return worst


def bernstein_spread(bank, seed: int = 0) -> float:
    """max(ratio, 1/ratio) over all blocks and exponents; the ratios lie in [1/8, 8] iff this is <= 8."""
    ratios = np.array([ratio for _, _, ratio in bernstein_ratios(bank, seed=seed)])
    return float(np.max(np.maximum(ratios, 1.0 / ratios)))


def _random_density(grid: GridSpec, rng, contrast: float = 0.2) -> ScalarField:
    bump = random_field(grid, rng, k_cut=4)
    return 1.0 + contrast * bump / lp_norm(bump, math.inf)


def lax_milgram_worst(grid: GridSpec, instances: int, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        rho = _random_density(grid, rng)
        F = random_vector_field(grid, rng, k_cut=8)
        solution = solve_pressure(rho, F)
        worst = max(worst, lax_milgram_check(rho, F, solution.gradPi))
    return worst


def taylor_green_error(n: int, alpha: float = 0.5, t_end: float = 0.05, dt: float = 1e-3) -> float:
    """Relative L2 distance between the damped Taylor-Green run and e^(-alpha t) u0."""
    config = SimConfig(alpha=alpha, gamma=1, grid=GridSpec(n=n), dt=dt, t_end=t_end, record_every=10)
    result = Simulation(config, show_progress=False).run()
    if not result.completed:
        return math.inf
    u0 = taylor_green(config.grid)
    exact = u0 * math.exp(-alpha * result.final_state.t)
    return lp_norm(result.final_state.u - exact, 2) / lp_norm(u0, 2)


def energy_balance_check(n: int, alpha: float = 0.5, t_end: float = 0.05, dt: float = 1e-3) -> float:
    config = SimConfig(
        alpha=alpha,
        gamma=0,
        grid=GridSpec(n=n),
        dt=dt,
        t_end=t_end,
        ic=InitialCondition(rho_preset="single_mode", rho_params={"k": (1, 0), "amplitude": 0.2}),
        record_every=1,
    )
    result = Simulation(config, show_progress=False).run()
    if not result.completed:
        return math.inf
    return energy_balance_residual(result.records, config.gamma, config.alpha)


def oracle_agreement(n: int = 16, seed: int = 0) -> float:
    """Max deviation of the iterative grad Pi from the dense least-squares solve."""
    grid = GridSpec(n=n)
    rho = single_mode(grid, k=(1, 0), amplitude=0.2)
    F = random_vector_field(grid, np.random.default_rng(seed), k_cut=grid.k_max)
    iterative = solve_pressure(rho, F).gradPi
    _, direct = direct_pressure_solve(rho, F)
    return lp_norm(iterative - direct, math.inf) / max(lp_norm(direct, math.inf), 1e-300)


def _harmonic_rows(bank, pairs: int) -> list:
    n = bank.grid.n
    return [
        _row("partition_of_unity", n, partition_residual(bank), PARTITION_TOL),
        _row("block_orthogonality", n, block_orthogonality_residual(bank), ORTHOGONALITY_TOL),
        _row("bony_identity", n, bony_residual(bank, pairs), BONY_TOL),
        _row("bernstein", n, bernstein_spread(bank), BERNSTEIN_BOUND),
    ]


def run_verification(level: str = "quick", bank_builder=build_filter_bank) -> pd.DataFrame:
    """
    Run the suite and return one row per check.

    Parameters:
    level (str): "quick" or "full".
    bank_builder (callable): GridSpec -> DyadicFilterBank, replaceable to inject faults.
    """
    if level not in LEVELS:
        raise ValueError(f"verification level must be one of {LEVELS}, got {level!r}")
    full = level == "full"
    rows = _harmonic_rows(bank_builder(GridSpec(n=64)), pairs=100 if full else 20)
    if full:
        rows += _harmonic_rows(bank_builder(GridSpec(n=128)), pairs=20)

    checks = [
        ("lax_milgram", 64, lambda: lax_milgram_worst(GridSpec(n=64), 50 if full else 10), 1 + LAX_MILGRAM_TOL),
        ("taylor_green_regression", 64, lambda: taylor_green_error(64), TAYLOR_GREEN_TOL),
        ("energy_balance", 64, lambda: energy_balance_check(64), ENERGY_TOL),
    ]
    if full:
        checks.append(("dense_pressure_oracle", 16, oracle_agreement, ORACLE_TOL))
    for name, n, probe, threshold in checks:
        try:
            value = probe()
        except (PressureSolveError, ValueError) as e:
            logger.error("check %s raised %s", name, e)
            value = math.inf
        rows.append(_row(name, n, value, threshold))
    return pd.DataFrame(rows, columns=["check", "n", "value", "threshold", "passed"])


def cmd_verify(level: str = "quick", bank_builder=build_filter_bank) -> int:
    table = run_verification(level, bank_builder)
    print(table.to_string(index=False, float_format=lambda x: f"{x:.3e}"))
    failed = table.loc[~table["passed"], "check"].tolist()
    if failed:
        logger.error("verification failed: %s", ", ".join(failed))
        return 1
    return 0
