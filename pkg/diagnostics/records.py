"""Per-record diagnostics of a run and their tabular form."""

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from fields.calculus import lp_norm
from littlewood_paley.besov import BesovIndex, besov_norm

B1_INF_1 = BesovIndex(1.0, math.inf, 1.0)


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    l2_u: float
    besov_u: tuple
    l2_gradPi: float
    besov_gradPi: tuple
    besov_rho_minus_1: float
    rho_min: float
    rho_max: float
    energy: float
    grad_u_inf: float
    bkm_running: float

    def dissipation(self, gamma: int) -> float:
        """avg(rho^gamma |u|^2) recovered from the stored norms."""
        return 2.0 * self.energy if gamma == 1 else self.l2_u**2

    def to_row(self) -> dict:
        row = {"t": self.t, "l2_u": self.l2_u}
        row.update({f"besov_u_{i}": value for i, value in enumerate(self.besov_u)})
        row["l2_gradPi"] = self.l2_gradPi
        row.update({f"besov_gradPi_{i}": value for i, value in enumerate(self.besov_gradPi)})
        row.update(
            besov_rho_minus_1=self.besov_rho_minus_1,
            rho_min=self.rho_min,
            rho_max=self.rho_max,
            energy=self.energy,
            grad_u_inf=self.grad_u_inf,
            bkm_running=self.bkm_running,
        )
        return row


def record_columns(n_indices: int) -> list:
    return (
        ["t", "l2_u"]
        + [f"besov_u_{i}" for i in range(n_indices)]
        + ["l2_gradPi"]
        + [f"besov_gradPi_{i}" for i in range(n_indices)]
        + ["besov_rho_minus_1", "rho_min", "rho_max", "energy", "grad_u_inf", "bkm_running"]
    )


def measure_state(bank, state, besov_indices, grad_u_inf: float, bkm_running: float) -> DiagnosticsRecord:
    """
    Evaluate every tracked norm on a state whose pressure gradient is attached.

    Parameters:
    bank (DyadicFilterBank): filter bank of the state's grid.
    state (FluidState): snapshot with gradPi set.
    besov_indices (tuple): BesovIndex values tracked for u and grad Pi.
    grad_u_inf (float): ||grad u||_inf at this time.
    bkm_running (float): running time integral of ||grad u||_inf.
    """
    if state.gradPi is None:
        raise ValueError("measure_state needs a state with its pressure gradient attached")
    rho, u, gradPi = state.rho, state.u, state.gradPi
    speed2 = sum(c.values**2 for c in u)
    return DiagnosticsRecord(
        t=float(state.t),
        l2_u=lp_norm(u, 2),
        besov_u=tuple(besov_norm(bank, u, idx) for idx in besov_indices),
        l2_gradPi=lp_norm(gradPi, 2),
        besov_gradPi=tuple(besov_norm(bank, gradPi, idx) for idx in besov_indices),
        besov_rho_minus_1=besov_norm(bank, rho - 1.0, B1_INF_1),
        rho_min=rho.min(),
        rho_max=rho.max(),
        energy=float(0.5 * np.mean(rho.values * speed2)),
        grad_u_inf=float(grad_u_inf),
        bkm_running=float(bkm_running),
    )


def records_to_frame(records: list, n_indices: int = None) -> pd.DataFrame:
    """One row per record, columns in the fixed CSV order."""
    if n_indices is None:
        n_indices = len(records[0].besov_u) if records else 0
    return pd.DataFrame([r.to_row() for r in records], columns=record_columns(n_indices))


def series(records: list, column: str) -> list:
    """(t, value) pairs of one column, e.g. series(records, "besov_u_0")."""
    frame = records_to_frame(records)
    return list(zip(frame["t"], frame[column]))
