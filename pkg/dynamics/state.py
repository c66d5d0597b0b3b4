"""Simulation state and configuration."""

import math
from dataclasses import dataclass, field, replace

from elliptic.pressure import PressureSolveParams
from fields.grid import GridSpec, ScalarField, VectorField
from littlewood_paley.besov import BesovIndex

DRIFT_TOL = 1e-6
DIVERGENCE_TOL = 1e-10
STEP_TOL = 1e-9


class InvariantViolation(RuntimeError):
    def __init__(self, message: str, quantity: str, value: float):
        super().__init__(message)
        self.quantity = quantity
        self.value = value


@dataclass(frozen=True, eq=False)
class FluidState:
    t: float
    rho: ScalarField
    u: VectorField
    gradPi: VectorField = None

    def with_pressure(self, gradPi: VectorField) -> "FluidState":
        return replace(self, gradPi=gradPi)


@dataclass(frozen=True)
class InitialCondition:
    u_preset: str = "taylor_green"
    u_params: dict = field(default_factory=dict)
    rho_preset: str = "constant"
    rho_params: dict = field(default_factory=dict)
    seed: int = 0


def default_besov_indices() -> tuple:
    return (BesovIndex(1.0, math.inf, 1.0),)


@dataclass(frozen=True)
class SimConfig:
    alpha: float = 0.5
    gamma: int = 1
    grid: GridSpec = field(default_factory=GridSpec)
    dt: float = 1e-3
    t_end: float = 1.0
    ic: InitialCondition = field(default_factory=InitialCondition)
    pressure: PressureSolveParams = field(default_factory=PressureSolveParams)
    besov_indices: tuple = field(default_factory=default_besov_indices)
    record_every: int = 10

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"physics.alpha must be >= 0, got {self.alpha}")
        if self.gamma not in (0, 1):
            raise ValueError(f"physics.gamma must be 0 or 1, got {self.gamma}")
        if not self.dt > 0:
            raise ValueError(f"time.dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError(f"time.t_end must be >= 0, got {self.t_end}")
        if abs(round(self.t_end / self.dt) * self.dt - self.t_end) > STEP_TOL * max(self.t_end, self.dt):
            raise ValueError(f"time.t_end must be a whole number of steps of time.dt, got t_end={self.t_end}, dt={self.dt}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError(f"time.record_every must be an integer >= 1, got {self.record_every}")
        object.__setattr__(self, "besov_indices", tuple(self.besov_indices))

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))
