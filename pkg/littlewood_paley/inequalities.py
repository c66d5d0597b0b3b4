"""
Numerical probes for the harmonic-analysis facts the estimates rely on.

Each probe returns raw numbers; the caller decides what bound to enforce.
"""

import math

import numpy as np

from fields.calculus import dealias, gradient, lp_norm
from fields.grid import GridSpec, ScalarField, random_field
from littlewood_paley.besov import BesovIndex, besov_norm, dyadic_block
from littlewood_paley.filter_bank import DyadicFilterBank


def partition_residual(bank: DyadicFilterBank) -> float:
    """Max over retained modes of |chi + sum_j phi_j - 1|."""
    total = sum(bank.profile(j) for j in bank.indices)
    return float(np.abs(total - 1.0)[bank.grid.dealias_mask].max())


def block_orthogonality_residual(bank: DyadicFilterBank) -> float:
    """Max of |phi_j phi_k| over all pairs with |j - k| >= 2; supports are disjoint."""
    worst = 0.0
    for j in bank.indices:
        for k in bank.indices:
            if abs(j - k) >= 2:
                worst = max(worst, float(np.abs(bank.profile(j) * bank.profile(k)).max()))
    return worst


def block_kernel_l1(bank: DyadicFilterBank, j: int) -> float:
    """l^1 norm of the grid convolution kernel of Delta_j, so ||Delta_j f||_inf <= it * ||f||_inf."""
    kernel = ScalarField.from_spectrum(bank.grid, bank.profile(j))
    return float(np.abs(kernel.values).sum())


def resolvable_besov_ceiling(bank: DyadicFilterBank, s: float) -> float:
    """
    Constant C with ||f||_{B^s_{inf,1}} <= C ||f||_inf for every field on the grid.

    Transport preserves ||f||_inf, so C caps the B^s growth any grid run can show.
    """
    return float(sum(2.0 ** (j * s) * block_kernel_l1(bank, j) for j in bank.indices))


def bernstein_ratios(bank: DyadicFilterBank, seed: int = 0, samples: int = 3, p_values=(2, math.inf)) -> list:
    """
    ||grad f||_{L^p} / (2^j ||f||_{L^p}) for random f localized in block j.

    Parameters:
    bank (DyadicFilterBank): filter bank of the grid.
    seed (int): random seed.
    samples (int): random fields per block.
    p_values (tuple): exponents to test.

    Returns:
    list of (j, p, ratio) for 1 <= j <= j_max - 1.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for j in range(1, bank.j_max):
        for _ in range(samples):
            f = dyadic_block(bank, random_field(bank.grid, rng), j)
            grad_f = gradient(f)
            for p in p_values:
                rows.append((j, p, lp_norm(grad_f, p) / (2.0**j * lp_norm(f, p))))
    return rows


def periodic_bump(grid: GridSpec, width: float, amplitude: float = 1.0) -> ScalarField:
    """Smooth periodic bump centred at (pi, pi) built from the chordal distance."""
    x, y = grid.coordinates
    centre = grid.length / 2
    scale = grid.length / (2 * math.pi)
    chord2 = 2 * scale**2 * ((1 - np.cos((x - centre) / scale)) + (1 - np.cos((y - centre) / scale)))
    return ScalarField(grid, amplitude * np.exp(-chord2 / (2 * width**2)))


def gagliardo_nirenberg_ratio(f: ScalarField) -> float:
    """||f||_inf / (||f||_2^(1/2) ||grad f||_inf^(1/2)); exponent 1/2 is the one scaling forces in 2-D."""
    denominator = math.sqrt(lp_norm(f, 2) * lp_norm(gradient(f), math.inf))
    return lp_norm(f, math.inf) / denominator


def gagliardo_nirenberg_ratios(grid: GridSpec, width: float = 0.6, dilations=(1, 2, 4)) -> dict:
    """Ratios for the dilation family f(lambda x) of a fixed bump."""
    return {lam: gagliardo_nirenberg_ratio(dealias(periodic_bump(grid, width / lam))) for lam in dilations}


def embedding_ratio(bank: DyadicFilterBank, f, idx: BesovIndex, eps: float = 0.5) -> float:
    """||f||_{B^(s-eps)_{p,r}} / ||f||_{B^s_{p,r}}; bounded independently of f."""
    lower = BesovIndex(idx.s - eps, idx.p, idx.r)
    top = besov_norm(bank, f, idx)
    return besov_norm(bank, f, lower) / top if top > 0 else 0.0
