"""Subcommand bodies; each returns a process exit code."""

import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from tqdm import tqdm

from cli.config import ConfigError, apply_override, load_config, parse_config, parse_value
from cli.output import condition_reports, json_safe, write_bundle, write_json
from dynamics.simulation import Simulation, initial_state
from littlewood_paley.filter_bank import build_filter_bank

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ABORT = 2
EXIT_CONDITION = 3

SWEEP_SUMMARY_FILE = "sweep_summary.json"


def _config_failure(error: Exception) -> int:
    logger.error("configuration error: %s", error)
    print(f"config error: {error}", file=sys.stderr)
    return EXIT_CONFIG


def execute_run(run_config, out_dir: str, show_progress: bool = True) -> tuple:
    """
    Integrate one configuration and write its output bundle.

    Returns:
    tuple: (exit code, summary dict or None)
    """
    try:
        simulation = Simulation(run_config.sim, show_progress=show_progress)
    except ValueError as e:
        return _config_failure(e), None
    result = simulation.run()
    summary = write_bundle(run_config, result, simulation.bank, out_dir)
    if not result.completed:
        logger.error("run aborted, partial output kept in %s", out_dir)
        return EXIT_ABORT, summary
    logger.info("run finished: %d steps, output in %s", result.steps_completed, out_dir)
    return EXIT_OK, summary


def cmd_run(config_path: str, out_dir: str, show_progress: bool = True) -> int:
    try:
        run_config = load_config(config_path)
    except ConfigError as e:
        return _config_failure(e)
    code, _ = execute_run(run_config, out_dir, show_progress)
    return code


def cmd_check(config_path: str) -> int:
    """Print the applicable smallness reports for the configured initial data."""
    try:
        run_config = load_config(config_path)
        config = run_config.sim
        state = initial_state(config)
        reports, satisfied = condition_reports(
            build_filter_bank(config.grid), config, run_config.smallness, state
        )
    except ValueError as e:
        return _config_failure(e)
    print(json.dumps(json_safe({"reports": reports, "satisfied": satisfied}), indent=2, sort_keys=True))
    return EXIT_OK if satisfied else EXIT_CONDITION


def _sweep_worker(job: tuple) -> tuple:
    label, document, out_dir = job
    code, summary = execute_run(parse_config(document), out_dir, show_progress=False)
    return label, code, summary


def _sweep_entry(value, code: int, summary: dict) -> dict:
    entry = {"value": value, "exit_code": code}
    if summary is None:
        return entry
    fit = summary["decay_fits"].get("l2_u")
    entry.update(
        failure=summary["failure"],
        l2_u_rate=fit["rate"] if fit else None,
        conditions={r["theorem_id"]: r["lhs"] for r in summary["conditions"]},
        conditions_satisfied=summary["conditions_satisfied"],
    )
    return entry


def cmd_sweep(config_path: str, param: str, values: list, out_dir: str, threads: int = None) -> int:
    """
    Run one simulation per value of a dotted config key, concurrently.

    Parameters:
    config_path (str): base configuration.
    param (str): dotted key, e.g. physics.alpha or ic.rho_params.amplitude.
    values (list): raw value strings, parsed as YAML scalars.
    out_dir (str): parent directory; each run writes to <out_dir>/<param>=<value>.
    threads (int): worker cap; defaults to THREADS from the environment, then the core count.
    """
    values = [v for v in (values or []) if str(v).strip()]
    if not values:
        return _config_failure(ConfigError("--values", "empty value list"))
    try:
        base = load_config(config_path).document
        jobs = []
        for raw in values:
            label = str(raw).strip()
            document = apply_override(base, param, parse_value(label))
            parse_config(document)
            jobs.append((label, document, os.path.join(out_dir, f"{param}={label}")))
    except ConfigError as e:
        return _config_failure(e)

    threads = threads or int(os.getenv("THREADS", 0)) or os.cpu_count() or 1
    os.makedirs(out_dir, exist_ok=True)
    entries = {}
    with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
        with tqdm(total=len(jobs), desc=f"Sweeping {param}") as pbar:
            for label, code, summary in pool.map(_sweep_worker, jobs):
                entries[label] = _sweep_entry(parse_value(label), code, summary)
                pbar.update(1)
    write_json({"param": param, "runs": entries}, os.path.join(out_dir, SWEEP_SUMMARY_FILE))
    codes = [entry["exit_code"] for entry in entries.values()]
    if EXIT_CONFIG in codes:
        return EXIT_CONFIG
    return EXIT_ABORT if EXIT_ABORT in codes else EXIT_OK
