"""Least-squares exponential decay rates of recorded series."""

from dataclasses import dataclass

import numpy as np
from scipy import stats

MIN_POINTS = 5


@dataclass(frozen=True)
class DecayFit:
    rate: float
    intercept: float
    r_squared: float
    window: tuple

    def to_dict(self) -> dict:
        return {"rate": self.rate, "intercept": self.intercept, "r_squared": self.r_squared, "window": list(self.window)}


def fit_decay_rate(series, window: tuple = None) -> DecayFit:
    """
    Fit log(value) = intercept - rate * t over a time window.

    Parameters:
    series (iterable): (t, value) pairs.
    window (tuple): (t_lo, t_hi); defaults to the trailing half [t_end/2, t_end].

    Returns:
    DecayFit: rate = -slope, with the coefficient of determination of the linear fit.
    """
    data = np.asarray(list(series), dtype=float).reshape(-1, 2)
    t, values = data[:, 0], data[:, 1]
    if window is None:
        t_end = float(t.max()) if t.size else 0.0
        window = (t_end / 2, t_end)
    lo, hi = window
    inside = (t >= lo) & (t <= hi)
    t, values = t[inside], values[inside]
    if t.size < MIN_POINTS:
        raise ValueError(f"decay fit needs at least {MIN_POINTS} points in window {window}, got {t.size}")
    if np.any(values <= 0):
        raise ValueError(f"decay fit needs positive values in window {window}")

    logs = np.log(values)
    fit = stats.linregress(t, logs)
    predicted = fit.intercept + fit.slope * t
    ss_res = float(np.sum((logs - predicted) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(
        rate=float(-fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(min(max(r_squared, 0.0), 1.0)),
        window=(float(lo), float(hi)),
    )
