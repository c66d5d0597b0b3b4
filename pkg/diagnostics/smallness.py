"""
Smallness conditions for global existence and the guaranteed decay rate beta_0.

The constants K and eta of the underlying theorems are existential; both
are exposed as tunable surrogates and echoed in every report.
"""

import math
from dataclasses import asdict, dataclass, field

from fields.calculus import lp_norm
from littlewood_paley.besov import BesovIndex, besov_norm

GAMMA1_GENERAL = "gamma1_general"
GAMMA0_GENERAL = "gamma0_general"
GAMMA1_2D = "gamma1_2d"

DEFAULT_ETA_GENERAL = 2.0
DEFAULT_ETA_2D = 5.01


@dataclass(frozen=True)
class SmallnessParams:
    """Surrogate constants. eta feeds the general conditions, eta_2d the planar one."""

    K: float = 1.0
    eta: float = None
    eta_2d: float = None
    delta: float = 0.01

    def __post_init__(self):
        if not self.K > 0:
            raise ValueError(f"smallness.K must be positive, got {self.K}")
        if self.eta is not None and not self.eta > 0:
            raise ValueError(f"smallness.eta must be positive, got {self.eta}")
        if self.eta_2d is not None and not self.eta_2d > 5:
            raise ValueError(f"smallness.eta_2d must exceed 5, got {self.eta_2d}")
        if not self.delta > 0:
            raise ValueError(f"smallness.delta must be positive, got {self.delta}")

    def eta_for(self, theorem_id: str) -> float:
        if theorem_id == GAMMA1_2D:
            return DEFAULT_ETA_2D if self.eta_2d is None else self.eta_2d
        return DEFAULT_ETA_GENERAL if self.eta is None else self.eta


@dataclass(frozen=True)
class InitialNorms:
    u_l2: float
    u_b1: float
    rho_b1: float
    dim: int = 2

    @property
    def u_intersection(self) -> float:
        """||u0||_{L^2 cap B^1_{inf,1}} as the sum of both norms."""
        return self.u_l2 + self.u_b1


@dataclass(frozen=True)
class ConditionReport:
    theorem_id: str
    lhs: tuple
    thresholds: tuple
    satisfied: bool
    inputs: dict = field(default_factory=dict)
    notes: tuple = ()

    def to_dict(self) -> dict:
        report = asdict(self)
        report["lhs"] = list(self.lhs)
        report["thresholds"] = list(self.thresholds)
        report["notes"] = list(self.notes)
        return report


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _check_alpha(alpha: float):
    if not alpha > 0:
        raise ValueError(f"damping coefficient alpha must be positive, got {alpha}")


def _report(theorem_id, lhs, thresholds, norms, alpha, params, eta, notes=()) -> ConditionReport:
    inputs = {
        "alpha": alpha,
        "K": params.K,
        "eta": eta,
        "u_l2": norms.u_l2,
        "u_b1": norms.u_b1,
        "rho_minus_1_b1": norms.rho_b1,
    }
    if params.eta is None and theorem_id != GAMMA1_2D:
        notes = tuple(notes) + (f"eta={eta:g} is a placeholder: the dimension-dependent exponent is not explicit",)
    satisfied = all(value < bound for value, bound in zip(lhs, thresholds))
    return ConditionReport(theorem_id, tuple(lhs), tuple(thresholds), satisfied, inputs, tuple(notes))


def smallness_gamma1_general(norms: InitialNorms, alpha: float, params: SmallnessParams = None) -> ConditionReport:
    """
    (1/alpha) ||u0||_{B^1} exp((1 + ||rho0 - 1||_{B^1}^eta) e^K (||u0||_{L^2}/alpha + 1)) < 2.
    """
    params = params or SmallnessParams()
    _check_alpha(alpha)
    eta = params.eta_for(GAMMA1_GENERAL)
    if norms.u_b1 == 0:
        lhs = 0.0
    else:
        exponent = (1 + norms.rho_b1**eta) * math.exp(params.K) * (norms.u_l2 / alpha + 1)
        lhs = norms.u_b1 / alpha * _exp(exponent)
    return _report(GAMMA1_GENERAL, (lhs,), (2.0,), norms, alpha, params, eta)


def smallness_gamma0_general(norms: InitialNorms, alpha: float, params: SmallnessParams = None) -> ConditionReport:
    """
    With R = 1 + ||rho0 - 1||_{B^1}^eta and N = ||u0||_{L^2 cap B^1}:
    K R e^(K R) N / alpha < 2 and K R^3 e^(K R) N^2 / alpha < 4.
    """
    params = params or SmallnessParams()
    _check_alpha(alpha)
    eta = params.eta_for(GAMMA0_GENERAL)
    K = params.K
    R = 1 + norms.rho_b1**eta
    N = norms.u_intersection
    growth = K * _exp(K * R)
    first = growth * R * N / alpha if N > 0 else 0.0
    second = growth * R**3 * N**2 / alpha if N > 0 else 0.0
    return _report(GAMMA0_GENERAL, (first, second), (2.0, 4.0), norms, alpha, params, eta)


def phi_k(z: float, K: float, alpha: float) -> float:
    """Phi_K(z) = e^(2 K z / alpha) e^(K exp(K z / alpha))."""
    return _exp(2 * K * z / alpha + K * _exp(K * z / alpha))


def smallness_gamma1_2d(norms: InitialNorms, alpha: float, params: SmallnessParams = None) -> ConditionReport:
    """
    Planar condition allowing large velocities:
    ||rho0 - 1|| (1 + ||rho0 - 1||^eta) N Phi_K(N) < 4, N = ||u0||_{L^2 cap B^1}.
    """
    params = params or SmallnessParams()
    _check_alpha(alpha)
    eta = params.eta_for(GAMMA1_2D)
    r = norms.rho_b1
    N = norms.u_intersection
    if r == 0 or N == 0:
        lhs = 0.0
    else:
        lhs = r * (1 + r**eta) * N * phi_k(N, params.K, alpha)
    return _report(GAMMA1_2D, (lhs,), (4.0,), norms, alpha, params, eta)


def beta0(alpha: float, rho_upper: float, s: float = 1.0, d: int = 2, delta: float = 0.01) -> float:
    """
    Decay rate guaranteed for gamma = 0: theta0 / (1 + theta0) * alpha / rho_upper,
    theta0 = 1 / (s + d/2 + delta).
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not rho_upper > 0:
        raise ValueError(f"rho_upper must be positive, got {rho_upper}")
    if s < 1:
        raise ValueError(f"regularity s must be >= 1, got {s}")
    if d < 1 or not delta > 0:
        raise ValueError(f"need d >= 1 and delta > 0, got d={d}, delta={delta}")
    theta0 = 1.0 / (s + d / 2 + delta)
    return theta0 / (1 + theta0) * alpha / rho_upper


def compute_initial_norms(bank, rho0, u0) -> InitialNorms:
    b1 = BesovIndex(1.0, math.inf, 1.0)
    return InitialNorms(
        u_l2=lp_norm(u0, 2),
        u_b1=besov_norm(bank, u0, b1),
        rho_b1=besov_norm(bank, rho0 - 1.0, b1),
        dim=rho0.grid.dim,
    )


def evaluate_conditions(norms: InitialNorms, alpha: float, gamma: int, params: SmallnessParams = None,
                        rho_upper: float = None) -> tuple:
    """
    Reports of every theorem that applies to (gamma, dim), and whether any of them holds.

    Returns:
    tuple: (list of ConditionReport, satisfied)
    """
    params = params or SmallnessParams()
    if gamma == 1:
        reports = [smallness_gamma1_general(norms, alpha, params)]
        if norms.dim == 2:
            reports.append(smallness_gamma1_2d(norms, alpha, params))
    else:
        report = smallness_gamma0_general(norms, alpha, params)
        if rho_upper is not None:
            rate = beta0(alpha, rho_upper, 1.0, norms.dim, params.delta)
            report.inputs["beta0"] = rate
        reports = [report]
    return reports, any(r.satisfied for r in reports)
