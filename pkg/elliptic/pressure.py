"""
Variable-coefficient pressure problem -div((1/rho) grad Pi) = div F on the torus.

The solver is a fixed-point iteration preconditioned by the constant-
coefficient Laplacian with coefficient a_bar, the midpoint of the range of
a = 1/rho. Pi is returned in the zero-mean gauge.
"""

import logging
import math
from dataclasses import dataclass, field

from fields.calculus import divergence, gradient, inverse_laplacian, lp_norm
from fields.grid import ScalarField, VectorField
from littlewood_paley.besov import BesovIndex, besov_norm

logger = logging.getLogger(__name__)


class PressureSolveError(RuntimeError):
    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class PressureSolveParams:
    tol: float = 1e-10
    max_iter: int = 500

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"pressure.tol must be positive, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"pressure.max_iter must be an integer >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class CoefficientBounds:
    a_star: float
    a_upper: float

    def __post_init__(self):
        if not 0 < self.a_star <= self.a_upper:
            raise ValueError(f"coefficient bounds must satisfy 0 < a_star <= a_upper, got {self.a_star}, {self.a_upper}")

    @classmethod
    def from_density(cls, rho: ScalarField) -> "CoefficientBounds":
        check_density(rho)
        return cls(a_star=1.0 / rho.max(), a_upper=1.0 / rho.min())

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a_star + self.a_upper)

    @property
    def contraction_factor(self) -> float:
        """||a - a_bar||_inf / a_bar, the fixed-point contraction bound."""
        return (self.a_upper - self.a_star) / (self.a_upper + self.a_star)


@dataclass(frozen=True)
class PressureSolution:
    Pi: ScalarField
    gradPi: VectorField
    iterations: int
    residual: float
    residual_history: tuple = field(default=())


def check_density(rho: ScalarField):
    if rho.min() <= 0:
        raise ValueError(f"density must be positive on the grid, min rho = {rho.min():.3e}")


def variable_coefficient_operator(rho: ScalarField, Pi: ScalarField) -> ScalarField:
    """-div((1/rho) grad Pi), evaluated by collocation."""
    return -divergence(gradient(Pi) * (1.0 / rho))


def solve_pressure(rho: ScalarField, F: VectorField, params: PressureSolveParams = None) -> PressureSolution:
    """
    Solve -div((1/rho) grad Pi) = div F for the zero-mean Pi.

    Parameters:
    rho (ScalarField): density, strictly positive.
    F (VectorField): right-hand side flux.
    params (PressureSolveParams): tolerance on the relative L2 residual and iteration cap.

    Returns:
    PressureSolution: Pi, grad Pi, iteration count, final residual and residual history.
    """
    params = params or PressureSolveParams()
    bounds = CoefficientBounds.from_density(rho)
    a = 1.0 / rho
    a_bar = bounds.midpoint
    div_F = divergence(F)
    scale = lp_norm(div_F, 2)

    Pi = inverse_laplacian(-div_F / a_bar)
    history = []
    for iteration in range(1, params.max_iter + 1):
        grad_Pi = gradient(Pi)
        flux = grad_Pi * a
        residual = lp_norm(-divergence(flux) - div_F, 2)
        residual = residual / scale if scale > 0 else residual
        history.append(residual)
        if residual <= params.tol:
            logger.debug("pressure solve converged in %d iterations, residual %.3e", iteration, residual)
            return PressureSolution(Pi, grad_Pi, iteration, residual, tuple(history))
        if iteration == params.max_iter:
            break
        correction = divergence(flux - grad_Pi * a_bar)
        Pi = inverse_laplacian(-(div_F + correction) / a_bar)
    raise PressureSolveError(
        f"pressure solve did not converge in {params.max_iter} iterations (residual {history[-1]:.3e}, "
        f"contraction factor {bounds.contraction_factor:.3f})",
        iterations=params.max_iter,
        residual=history[-1],
    )


def lax_milgram_check(rho: ScalarField, F: VectorField, gradPi: VectorField, tolerance: float = 1e-12) -> float:
    """
    a_star ||grad Pi||_{L^2} / ||F||_{L^2}, which a converged solve keeps <= 1.

    Raises ValueError when F vanishes but grad Pi does not.
    """
    grad_norm = lp_norm(gradPi, 2)
    F_norm = lp_norm(F, 2)
    if F_norm == 0:
        if grad_norm > tolerance:
            raise ValueError(f"inconsistent pressure: F = 0 but ||grad Pi|| = {grad_norm:.3e}")
        return 0.0
    return CoefficientBounds.from_density(rho).a_star * grad_norm / F_norm


def pressure_estimate_ratio(bank, rho: ScalarField, F: VectorField, gradPi: VectorField, eta: float = 2.0) -> float:
    """
    ||grad Pi||_{B^1_{inf,1}} / [(1 + ||grad rho||_inf^eta) ||F||_{L^2} + ||rho div F||_{B^0_{inf,1}}].

    Reported, not bounded: the constant of the higher-regularity pressure
    estimate is not explicit.
    """
    b1 = BesovIndex(1.0, math.inf, 1.0)
    b0 = BesovIndex(0.0, math.inf, 1.0)
    denominator = (1 + lp_norm(gradient(rho), math.inf) ** eta) * lp_norm(F, 2) + besov_norm(bank, rho * divergence(F), b0)
    if denominator == 0:
        return 0.0
    return besov_norm(bank, gradPi, b1) / denominator
