"""Continuation (BKM) integral and kinetic-energy balance over recorded runs."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate

logger = logging.getLogger(__name__)

TAIL_INTERVALS = 5


@dataclass(frozen=True)
class BKMReport:
    integral: float
    increments: tuple
    tail_ratio: float
    geometric_tail: bool

    def to_dict(self) -> dict:
        return {
            "integral": self.integral,
            "increments": list(self.increments),
            "tail_ratio": self.tail_ratio,
            "geometric_tail": self.geometric_tail,
        }


def bkm_report(records: list) -> BKMReport:
    """
    Trapezoid integral of ||grad u||_inf over the records and its per-interval increments.

    The verdict is advisory: the tail counts as geometric when every ratio of
    consecutive increments over the last intervals is below one.
    """
    if len(records) < 2:
        raise ValueError(f"BKM report needs at least 2 records, got {len(records)}")
    t = np.array([r.t for r in records])
    g = np.array([r.grad_u_inf for r in records])
    increments = 0.5 * np.diff(t) * (g[1:] + g[:-1])
    integral = float(integrate.trapezoid(g, t))

    tail = increments[-(TAIL_INTERVALS + 1):]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = tail[1:] / tail[:-1]
    ratios = ratios[np.isfinite(ratios)]
    tail_ratio = float(ratios.max()) if ratios.size else 0.0
    geometric = bool(ratios.size) and tail_ratio < 1
    if not geometric and integral > 0:
        logger.warning("BKM increments do not decay geometrically (tail ratio %.3f)", tail_ratio)
    return BKMReport(integral, tuple(float(x) for x in increments), tail_ratio, geometric)


def energy_balance_residual(records: list, gamma: int, alpha: float, spacing_tol: float = 1e-9) -> float:
    """
    Max over interior records of |dE/dt + alpha avg(rho^gamma |u|^2)|, normalized by alpha E(0).

    dE/dt is the fourth-order centered difference of the recorded energy, so
    the records must be uniformly spaced in time.
    """
    if len(records) < 5:
        raise ValueError(f"energy balance needs at least 5 records, got {len(records)}")
    t = np.array([r.t for r in records])
    steps = np.diff(t)
    if np.ptp(steps) > spacing_tol * max(steps.max(), 1.0):
        raise ValueError("energy balance needs uniformly spaced records")
    h = float(steps.mean())
    energy = np.array([r.energy for r in records])
    dissipation = np.array([r.dissipation(gamma) for r in records])
    dE = (energy[:-4] - 8 * energy[1:-3] + 8 * energy[3:-1] - energy[4:]) / (12 * h)
    residual = np.abs(dE + alpha * dissipation[2:-2])
    scale = alpha * energy[0] if alpha > 0 else energy[0]
    if scale == 0:
        return 0.0
    return float(residual.max() / scale)
