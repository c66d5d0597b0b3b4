"""Dyadic blocks, low-frequency cut-offs and non-homogeneous Besov norms."""

import math
from dataclasses import dataclass

import numpy as np

from fields.calculus import apply_multiplier, lp_norm
from littlewood_paley.filter_bank import DyadicFilterBank


def _parse_exponent(value, name: str) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf"):
            return math.inf
        raise ValueError(f"{name} must be a number or 'inf', got {value!r}")
    return float(value)


@dataclass(frozen=True)
class BesovIndex:
    s: float
    p: float = math.inf
    r: float = 1.0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"Besov integrability p must be >= 1, got {self.p}")
        if self.r < 1:
            raise ValueError(f"Besov summability r must be >= 1, got {self.r}")

    @classmethod
    def parse(cls, triple) -> "BesovIndex":
        """Build from an [s, p, r] triple where p and r may be the string 'inf'."""
        if len(triple) != 3:
            raise ValueError(f"Besov index needs exactly [s, p, r], got {triple!r}")
        s, p, r = triple
        return cls(float(s), _parse_exponent(p, "p"), _parse_exponent(r, "r"))

    def lipschitz_embedding(self, dim: int = 2) -> bool:
        """True when B^s_{p,r} embeds in the globally Lipschitz functions."""
        critical = 1 + dim / self.p
        return self.s > critical or (self.s == critical and self.r == 1)

    @property
    def label(self) -> str:
        def fmt(x):
            return "inf" if math.isinf(x) else f"{x:g}"

        return f"B{self.s:g}_{fmt(self.p)}_{fmt(self.r)}"

    def as_list(self) -> list:
        return [self.s, "inf" if math.isinf(self.p) else self.p, "inf" if math.isinf(self.r) else self.r]


def dyadic_block(bank: DyadicFilterBank, f, j: int):
    """
    Littlewood-Paley block Delta_j f.

    Parameters:
    bank (DyadicFilterBank): filter bank matching f's grid.
    f (ScalarField | VectorField): field to localize.
    j (int): block index in [-1, j_max].

    Returns:
    Same type as f.
    """
    return apply_multiplier(f, bank.profile(j))


def low_cutoff(bank: DyadicFilterBank, f, j: int):
    """S_j f, the sum of the blocks below j."""
    return apply_multiplier(f, bank.low_profile(j))


def sequence_norm(terms, r: float) -> float:
    terms = np.asarray(terms, dtype=float)
    if terms.size == 0:
        return 0.0
    if math.isinf(r):
        return float(terms.max())
    return float(np.sum(terms**r) ** (1.0 / r))


def block_norms(bank: DyadicFilterBank, f, p: float) -> list:
    return [lp_norm(dyadic_block(bank, f, j), p) for j in bank.indices]


def besov_norm(bank: DyadicFilterBank, f, idx: BesovIndex) -> float:
    """l^r norm over j of 2^(j s) ||Delta_j f||_{L^p}."""
    weighted = [2.0 ** (j * idx.s) * norm for j, norm in zip(bank.indices, block_norms(bank, f, idx.p))]
    return sequence_norm(weighted, idx.r)


def intersection_norm(bank: DyadicFilterBank, f, idx: BesovIndex) -> float:
    """Norm of L^2 intersected with B^s_{p,r}, realized as the sum of both norms."""
    return lp_norm(f, 2) + besov_norm(bank, f, idx)
