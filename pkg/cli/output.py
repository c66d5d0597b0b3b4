"""Run artifacts: records.csv, summary.json and diagnostics.png."""

import json
import logging
import math
import os

from cli import __version__
from diagnostics.decay import fit_decay_rate
from diagnostics.monitors import bkm_report, energy_balance_residual
from diagnostics.plotting import plot_records
from diagnostics.records import records_to_frame
from diagnostics.smallness import compute_initial_norms, evaluate_conditions

logger = logging.getLogger(__name__)

RECORDS_FILE = "records.csv"
SUMMARY_FILE = "summary.json"
FIGURE_FILE = "diagnostics.png"


def json_safe(value):
    """JSON has no infinity; non-finite floats become strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def write_json(payload: dict, path: str):
    with open(path, "w") as file:
        json.dump(json_safe(payload), file, indent=2, sort_keys=True)
        file.write("\n")
    return path


def write_records(frame, path: str):
    frame.to_csv(path, index=False, float_format="%.16e")
    return path


def condition_reports(bank, config, smallness, state) -> tuple:
    """(list of report dicts, satisfied) for the initial data of a run."""
    norms = compute_initial_norms(bank, state.rho, state.u)
    reports, satisfied = evaluate_conditions(
        norms, config.alpha, config.gamma, smallness, rho_upper=state.rho.max()
    )
    return [r.to_dict() for r in reports], satisfied


def decay_fits(frame) -> dict:
    columns = ["l2_u", "l2_gradPi"] + [c for c in frame.columns if c.startswith(("besov_u_", "besov_gradPi_"))]
    fits = {}
    for column in columns:
        try:
            fits[column] = fit_decay_rate(zip(frame["t"], frame[column])).to_dict()
        except ValueError as e:
            logger.info("no decay fit for %s: %s", column, e)
            fits[column] = None
    return fits


def build_summary(run_config, result, bank) -> dict:
    config = run_config.sim
    records = result.records
    frame = records_to_frame(records, len(config.besov_indices))
    summary = {
        "version": __version__,
        "config": run_config.document,
        "steps_completed": result.steps_completed,
        "completed": result.completed,
        "failure": result.failure,
        "decay_fits": decay_fits(frame),
    }
    summary["conditions"], summary["conditions_satisfied"] = [], False
    if config.alpha > 0:
        try:
            summary["conditions"], summary["conditions_satisfied"] = condition_reports(
                bank, config, run_config.smallness, result.initial_state
            )
        except ValueError as e:
            logger.warning("smallness conditions skipped: %s", e)
    try:
        summary["energy_residual"] = energy_balance_residual(records, config.gamma, config.alpha)
    except ValueError as e:
        logger.info("energy residual skipped: %s", e)
        summary["energy_residual"] = None
    try:
        summary["bkm"] = bkm_report(records).to_dict()
    except ValueError as e:
        logger.info("BKM report skipped: %s", e)
        summary["bkm"] = None
    return summary


def write_bundle(run_config, result, bank, out_dir: str) -> dict:
    """Write every artifact of one run into out_dir and return the summary."""
    os.makedirs(out_dir, exist_ok=True)
    frame = records_to_frame(result.records, len(run_config.sim.besov_indices))
    write_records(frame, os.path.join(out_dir, RECORDS_FILE))
    summary = build_summary(run_config, result, bank)
    write_json(summary, os.path.join(out_dir, SUMMARY_FILE))
    if len(frame) >= 2:
        plot_records(frame, os.path.join(out_dir, FIGURE_FILE))
    return summary
