"""
Dyadic filter bank {chi, phi_j} realized as Fourier multipliers on the grid.

Block -1 has profile chi(2 xi); block j >= 0 has profile
chi(2^-j xi) - chi(2^(1-j) xi), except the top block j_max, which takes
every mode left above S_{j_max}. The profiles therefore sum to one on
every grid mode.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from fields.grid import GridSpec

logger = logging.getLogger(__name__)

CHI_INNER = 1.1
CHI_OUTER = 1.9


def smooth_transition(t):
    """psi(t) = h(t) / (h(t) + h(1 - t)) with h(t) = exp(-1/t) for t > 0, else 0."""
    t = np.asarray(t, dtype=float)

    def h(s):
        positive = s > 0
        return np.where(positive, np.exp(-1.0 / np.where(positive, s, 1.0)), 0.0)

    return h(t) / (h(t) + h(1.0 - t))


def chi(radius):
    """Radial low-pass profile: 1 on |xi| <= 1.1, 0 on |xi| >= 1.9, smooth in between."""
    return 1.0 - smooth_transition((np.asarray(radius, dtype=float) - CHI_INNER) / (CHI_OUTER - CHI_INNER))


@dataclass(frozen=True, eq=False)
class DyadicFilterBank:
    grid: GridSpec
    j_max: int
    chi_profile: np.ndarray
    phi_profiles: tuple

    def profile(self, j: int) -> np.ndarray:
        if j < -1 or j > self.j_max:
            raise ValueError(f"block index must lie in [-1, {self.j_max}], got {j}")
        return self.chi_profile if j == -1 else self.phi_profiles[j]

    @property
    def indices(self) -> range:
        return range(-1, self.j_max + 1)

    def low_profile(self, j: int) -> np.ndarray:
        """Symbol of S_j = sum of the blocks k <= j - 1."""
        if j < 0:
            raise ValueError(f"low cut-off index must be >= 0, got {j}")
        return self._low_profiles[min(j, self.j_max + 1)]

    def __post_init__(self):
        # cumulative sums keep S_j exactly consistent with the blocks
        cumulative = [self.chi_profile]
        for phi in self.phi_profiles:
            cumulative.append(cumulative[-1] + phi)
        object.__setattr__(self, "_low_profiles", tuple(cumulative))


def resolved_j_max(grid: GridSpec) -> int:
    """Smallest J with 1.9 * 2^J >= k_max * sqrt(dim)."""
    corner = grid.k_max * math.sqrt(grid.dim)
    j = 0
    while CHI_OUTER * 2**j < corner:
        j += 1
    return j


def build_filter_bank(grid: GridSpec) -> DyadicFilterBank:
    """
    Evaluate the dyadic profiles on the grid wavenumbers.

    Parameters:
    grid (GridSpec): grid whose dealias cutoff fixes j_max.

    Returns:
    DyadicFilterBank: immutable, shareable between threads.
    """
    j_max = resolved_j_max(grid)
    if j_max < 1:
        raise ValueError(f"grid n={grid.n} is too small to host a dyadic block j >= 1")
    radius = grid.radius
    chi_profile = chi(2.0 * radius)
    phis = [chi(radius / 2.0**j) - chi(radius / 2.0 ** (j - 1)) for j in range(j_max)]
    phis.append(1.0 - chi(radius / 2.0 ** (j_max - 1)))
    logger.debug("filter bank built: n=%d, k_max=%d, j_max=%d", grid.n, grid.k_max, j_max)
    return DyadicFilterBank(grid=grid, j_max=j_max, chi_profile=chi_profile, phi_profiles=tuple(phis))
