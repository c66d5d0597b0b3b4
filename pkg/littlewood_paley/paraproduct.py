"""Bony decomposition uv = T_u v + T_v u + R(u, v) and commutator diagnostics."""

import math

import numpy as np

from fields.calculus import dealias, gradient, lp_norm
from fields.grid import ScalarField, VectorField
from littlewood_paley.besov import BesovIndex, besov_norm, dyadic_block, low_cutoff
from littlewood_paley.filter_bank import DyadicFilterBank


def paraproduct(bank: DyadicFilterBank, u: ScalarField, v: ScalarField) -> ScalarField:
    """T_u v = sum over j >= 1 of S_{j-1}u * Delta_j v, dealiased."""
    total = np.zeros(u.grid.shape)
    for j in range(1, bank.j_max + 1):
        total += low_cutoff(bank, u, j - 1).values * dyadic_block(bank, v, j).values
    return dealias(ScalarField(u.grid, total))


def remainder(bank: DyadicFilterBank, u: ScalarField, v: ScalarField) -> ScalarField:
    """R(u, v) = sum over |j - k| <= 1 of Delta_j u * Delta_k v, dealiased."""
    u_blocks = {j: dyadic_block(bank, u, j).values for j in bank.indices}
    v_blocks = {j: dyadic_block(bank, v, j).values for j in bank.indices}
    total = np.zeros(u.grid.shape)
    for j in bank.indices:
        for k in (j - 1, j, j + 1):
            if k in v_blocks:
                total += u_blocks[j] * v_blocks[k]
    return dealias(ScalarField(u.grid, total))


def _scaled(f: ScalarField, v):
    if isinstance(v, VectorField):
        return VectorField(tuple(dealias(ScalarField(f.grid, f.values * c.values)) for c in v))
    return dealias(ScalarField(f.grid, f.values * v.values))


def commutator(bank: DyadicFilterBank, f: ScalarField, v, j: int):
    """[f, Delta_j] v = f Delta_j v - Delta_j (f v)."""
    return _scaled(f, dyadic_block(bank, v, j)) - dyadic_block(bank, _scaled(f, v), j)


def commutator_damping_profile(bank: DyadicFilterBank, f: ScalarField, v: VectorField, idx: BesovIndex) -> list:
    """
    Per-block size of the commutator that controls the damping term.

    Parameters:
    bank (DyadicFilterBank): filter bank of the grid.
    f (ScalarField): multiplier, typically a power of the density.
    v (VectorField): field being localized.
    idx (BesovIndex): regularity s and integrability p used for the blocks.

    Returns:
    list: (j, 2^(j s) ||[f, Delta_j] v||_{L^p}, envelope) for j = -1..j_max;
    the envelope ||f||_{B^1_{inf,1}} ||v||_{B^(s-1)_{p,r}} + ||grad f||_{B^(s-1)_{p,r}} ||v||_{L^inf}
    does not depend on j.
    """
    lower = BesovIndex(idx.s - 1, idx.p, idx.r)
    envelope = (
        besov_norm(bank, f, BesovIndex(1.0, math.inf, 1.0)) * besov_norm(bank, v, lower)
        + besov_norm(bank, gradient(f), lower) * lp_norm(v, math.inf)
    )
    profile = []
    for j in bank.indices:
        lhs = 2.0 ** (j * idx.s) * lp_norm(commutator(bank, f, v, j), idx.p)
        profile.append((j, lhs, envelope))
    return profile


def sup_ratio(profile: list) -> float:
    """Largest lhs_j / envelope of a commutator profile (0 when both vanish)."""
    ratios = [lhs / envelope if envelope > 0 else (math.inf if lhs > 0 else 0.0) for _, lhs, envelope in profile]
    return max(ratios)
