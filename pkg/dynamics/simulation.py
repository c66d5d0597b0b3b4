"""
Time integration driver.

Simulation owns its state (single writer); records handed out are
immutable snapshots.
"""

import logging
import math
from dataclasses import dataclass, field

from tqdm import tqdm

from diagnostics.records import DiagnosticsRecord, measure_state, records_to_frame
from dynamics.initial_conditions import build_density, build_velocity
from dynamics.integrator import step_rk4
from dynamics.state import FluidState, InvariantViolation, SimConfig
from dynamics.tendencies import attach_pressure
from elliptic.pressure import PressureSolveError
from fields.calculus import lp_norm, velocity_gradient_sup
from littlewood_paley.filter_bank import build_filter_bank

logger = logging.getLogger(__name__)


@dataclass
class SimulationResult:
    records: list
    failure: str = None
    final_state: FluidState = None
    steps_completed: int = 0
    initial_state: FluidState = field(default=None, repr=False)

    @property
    def completed(self) -> bool:
        return self.failure is None

    def frame(self):
        return records_to_frame(self.records)


def initial_state(config: SimConfig) -> FluidState:
    ic = config.ic
    rho = build_density(config.grid, ic.rho_preset, ic.rho_params)
    u = build_velocity(config.grid, ic.u_preset, ic.u_params, seed=ic.seed)
    return FluidState(0.0, rho, u)


class Simulation:
    def __init__(self, config: SimConfig, show_progress: bool = True):
        self.config = config
        self.show_progress = show_progress
        self.bank = build_filter_bank(config.grid)
        self.state = initial_state(config)
        self.initial = self.state
        self.density_bounds = (self.state.rho.min(), self.state.rho.max())
        self.records = []
        self.steps = 0
        self.grad_u_inf = velocity_gradient_sup(self.state.u)
        self.bkm_running = 0.0
        self._check_cfl()

    def _check_cfl(self):
        grid = self.config.grid
        cfl = self.config.dt * lp_norm(self.state.u, math.inf) * grid.n / grid.length
        if cfl > 0.5:
            logger.warning("CFL number %.3f exceeds 0.5 (dt=%g, n=%d); expect instability", cfl, self.config.dt, grid.n)

    def step(self) -> FluidState:
        self.state = step_rk4(self.state, self.config, self.density_bounds)
        self.steps += 1
        # t = steps * dt, not a running sum
        self.state = FluidState(self.steps * self.config.dt, self.state.rho, self.state.u)
        grad_u_inf = velocity_gradient_sup(self.state.u)
        self.bkm_running += 0.5 * self.config.dt * (self.grad_u_inf + grad_u_inf)
        self.grad_u_inf = grad_u_inf
        return self.state

    def record(self) -> DiagnosticsRecord:
        self.state = attach_pressure(self.state, self.config)
        record = measure_state(
            self.bank,
            self.state,
            self.config.besov_indices,
            grad_u_inf=self.grad_u_inf,
            bkm_running=self.bkm_running,
        )
        self.records.append(record)
        return record

    def run(self) -> SimulationResult:
        n_steps = self.config.n_steps
        every = self.config.record_every
        failure = None
        try:
            self.record()
            with tqdm(total=n_steps, desc="Integrating", disable=not self.show_progress) as pbar:
                while self.steps < n_steps:
                    self.step()
                    if self.steps % every == 0 or self.steps == n_steps:
                        self.record()
                    pbar.update(1)
        except (PressureSolveError, InvariantViolation) as e:
            failure = f"{type(e).__name__} after {self.steps} steps: {e}"
            logger.error("simulation aborted: %s", failure)
        return SimulationResult(
            records=list(self.records),
            failure=failure,
            final_state=self.state,
            steps_completed=self.steps,
            initial_state=self.initial,
        )


def run_simulation(config: SimConfig, show_progress: bool = False) -> SimulationResult:
    """Integrate to config.t_end, recording every config.record_every steps (and the final step)."""
    return Simulation(config, show_progress=show_progress).run()
