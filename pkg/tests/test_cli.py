import json
import math
from dataclasses import replace
from pathlib import Path

import pandas as pd
import pytest
import yaml

import cli.verify as verify
from cli.commands import EXIT_ABORT, EXIT_CONDITION, EXIT_CONFIG, EXIT_OK, SWEEP_SUMMARY_FILE, cmd_check, cmd_run, cmd_sweep
from cli.config import ConfigError, apply_override, load_config, parse_config, parse_value
from cli.main import build_parser, main
from cli.output import FIGURE_FILE, RECORDS_FILE, SUMMARY_FILE, json_safe
from diagnostics.monitors import bkm_report
from diagnostics.records import record_columns
from diagnostics.smallness import compute_initial_norms
from dynamics.initial_conditions import taylor_green
from dynamics.simulation import run_simulation
from fields.grid import GridSpec, ScalarField
from littlewood_paley.filter_bank import build_filter_bank

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def small_document(**sections):
    document = {
        "physics": {"alpha": 0.5, "gamma": 1},
        "grid": {"n": 16},
        "time": {"dt": 0.01, "t_end": 0.1, "record_every": 2},
        "ic": {"u_preset": "taylor_green", "rho_preset": "constant"},
    }
    for name, body in sections.items():
        document.setdefault(name, {}).update(body)
    return document


@pytest.fixture
def write_config(tmp_path):
    def write(document, name="config.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(document))
        return str(path)

    return write


# -----------------------------------------------------------------------------
# Configuration
# -----------------------------------------------------------------------------


def test_parse_config_builds_run(caplog):
    run = parse_config(small_document(track={"besov_indices": [[1, "inf", 1], [0.5, 2, 2]]}))
    assert run.sim.alpha == 0.5
    assert run.sim.grid.n == 16
    assert run.sim.n_steps == 10
    assert len(run.sim.besov_indices) == 2
    assert "Lipschitz" in caplog.text
    assert run.smallness.eta is None


@pytest.mark.parametrize(
    "patch, key",
    [
        ({"physics": {"alpha": -1.0}}, "physics.alpha"),
        ({"physics": {"alpha": True}}, "physics.alpha"),
        ({"physics": {"beta": 1.0}}, "physics.beta"),
        ({"time": {"dt": 0.0}}, "time.dt"),
        ({"time": {"t_end": 0.105}}, "time.t_end"),
        ({"ic": {"u_preset": "hurricane"}}, "ic.u_preset"),
        ({"ic": {"rho_preset": "vacuum"}}, "ic.rho_preset"),
        ({"track": {"besov_indices": []}}, "track.besov_indices"),
        ({"smallness": {"K": -2.0}}, "smallness.K"),
        ({"smallness": {"eta_2d": 4.0}}, "smallness.eta_2d"),
    ],
)
def test_config_errors_name_the_key(patch, key):
    with pytest.raises(ConfigError) as error:
        parse_config(small_document(**patch))
    assert error.value.key == key
    assert key in str(error.value)


def test_unknown_section_is_rejected():
    document = small_document()
    document["output"] = {"dir": "x"}
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config(document)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(str(tmp_path / "missing.yaml"))
    broken = tmp_path / "broken.yaml"
    broken.write_text("physics: [alpha: 1\n")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(str(broken))


def test_shipped_configs_parse():
    for path in sorted(CONFIGS.glob("*.yaml")):
        run = load_config(str(path))
        assert run.sim.grid.n >= 16


def test_apply_override():
    document = small_document()
    updated = apply_override(document, "ic.rho_params.amplitude", 0.3)
    assert updated["ic"]["rho_params"] == {"amplitude": 0.3}
    assert "rho_params" not in document["ic"]
    assert apply_override(document, "physics.alpha", 2.0)["physics"]["alpha"] == 2.0
    with pytest.raises(ConfigError):
        apply_override(document, "physics.beta", 1.0)
    with pytest.raises(ConfigError, match="no sub-keys"):
        apply_override(document, "grid.n.x", 1)
    with pytest.raises(ConfigError):
        apply_override(document, "alpha", 1.0)


def test_parse_value():
    assert parse_value("0.5") == 0.5
    assert parse_value("3") == 3
    assert parse_value("inf") == math.inf
    assert parse_value("[1, 0]") == [1, 0]
    assert parse_value("taylor_green") == "taylor_green"


def test_json_safe():
    assert json_safe({"a": [math.inf, 1.0], "b": (float("nan"),)}) == {"a": ["inf", 1.0], "b": ["nan"]}


# -----------------------------------------------------------------------------
# run
# -----------------------------------------------------------------------------


def test_run_writes_bundle(write_config, tmp_path):
    out = tmp_path / "out"
    assert cmd_run(write_config(small_document()), str(out), show_progress=False) == EXIT_OK
    frame = pd.read_csv(out / RECORDS_FILE)
    assert len(frame) == 6
    assert list(frame.columns) == record_columns(1)
    assert frame["t"].iloc[-1] == pytest.approx(0.1)
    summary = json.loads((out / SUMMARY_FILE).read_text())
    assert summary["completed"] and summary["failure"] is None
    assert summary["steps_completed"] == 10
    assert summary["config"]["physics"]["alpha"] == 0.5
    assert {r["theorem_id"] for r in summary["conditions"]} == {"gamma1_general", "gamma1_2d"}
    assert (out / FIGURE_FILE).exists()


def test_run_output_is_deterministic(write_config, tmp_path):
    path = write_config(small_document())
    cmd_run(path, str(tmp_path / "a"), show_progress=False)
    cmd_run(path, str(tmp_path / "b"), show_progress=False)
    assert (tmp_path / "a" / RECORDS_FILE).read_bytes() == (tmp_path / "b" / RECORDS_FILE).read_bytes()


def test_run_rejects_bad_config(write_config, tmp_path, capsys):
    path = write_config(small_document(physics={"alpha": -1.0}))
    assert cmd_run(path, str(tmp_path / "out"), show_progress=False) == EXIT_CONFIG
    assert "physics.alpha" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()
    path = write_config(small_document(physics={"viscosity": 1.0}))
    assert cmd_run(path, str(tmp_path / "out"), show_progress=False) == EXIT_CONFIG


def test_run_abort_keeps_partial_output(write_config, tmp_path):
    document = small_document(
        physics={"gamma": 0},
        ic={"rho_preset": "single_mode", "rho_params": {"amplitude": 0.6}},
        pressure={"max_iter": 1},
    )
    out = tmp_path / "out"
    assert cmd_run(write_config(document), str(out), show_progress=False) == EXIT_ABORT
    frame = pd.read_csv(out / RECORDS_FILE)
    assert list(frame.columns) == record_columns(1)
    summary = json.loads((out / SUMMARY_FILE).read_text())
    assert not summary["completed"]
    assert "PressureSolveError" in summary["failure"]
    assert summary["steps_completed"] == 0
    assert summary["bkm"] is None


def test_run_with_general_exponent_keeps_planar_report(write_config, tmp_path):
    out = tmp_path / "out"
    document = small_document(ic={"rho_preset": "single_mode", "rho_params": {"amplitude": 0.05}}, smallness={"eta": 2.0})
    assert cmd_run(write_config(document), str(out), show_progress=False) == EXIT_OK
    summary = json.loads((out / SUMMARY_FILE).read_text())
    reports = {r["theorem_id"]: r for r in summary["conditions"]}
    assert reports["gamma1_general"]["inputs"]["eta"] == 2.0
    assert reports["gamma1_2d"]["inputs"]["eta"] == 5.01


def test_run_rejects_small_planar_exponent(write_config, tmp_path, capsys):
    path = write_config(small_document(smallness={"eta_2d": 2.0}))
    assert cmd_run(path, str(tmp_path / "out"), show_progress=False) == EXIT_CONFIG
    assert "smallness.eta_2d" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


# -----------------------------------------------------------------------------
# check
# -----------------------------------------------------------------------------


def test_check_uniform_density(write_config, capsys):
    assert cmd_check(write_config(small_document())) == EXIT_OK
    printed = json.loads(capsys.readouterr().out)
    planar = next(r for r in printed["reports"] if r["theorem_id"] == "gamma1_2d")
    assert planar["lhs"] == [0.0]
    assert printed["satisfied"]


def test_check_large_data_fails():
    assert cmd_check(str(CONFIGS / "large_data.yaml")) == EXIT_CONDITION


def test_check_needs_damping(write_config):
    assert cmd_check(write_config(small_document(physics={"alpha": 0.0}))) == EXIT_CONFIG


def test_check_reproduces_planar_hand_value(write_config, capsys):
    grid = GridSpec(n=16)
    unit = compute_initial_norms(build_filter_bank(grid), ScalarField.constant(grid, 1.0), taylor_green(grid))
    document = small_document(
        ic={
            "u_params": {"amplitude": 1.0 / unit.u_intersection},
            "rho_preset": "single_mode",
            "rho_params": {"amplitude": 0.01},
        },
        physics={"alpha": 1.0},
        smallness={"K": 1.0, "eta_2d": 5.01},
    )
    assert cmd_check(write_config(document)) == EXIT_OK
    printed = json.loads(capsys.readouterr().out)
    planar = next(r for r in printed["reports"] if r["theorem_id"] == "gamma1_2d")
    assert planar["inputs"]["rho_minus_1_b1"] == pytest.approx(0.01, rel=1e-9)
    assert planar["lhs"][0] == pytest.approx(1.1195, abs=1e-3)
    assert planar["satisfied"]


def test_check_shipped_small_density_config(capsys):
    assert cmd_check(str(CONFIGS / "small_density_2d.yaml")) == EXIT_OK
    reports = {r["theorem_id"]: r for r in json.loads(capsys.readouterr().out)["reports"]}
    assert reports["gamma1_2d"]["satisfied"]
    assert not reports["gamma1_general"]["satisfied"]


@pytest.mark.slow
def test_planar_small_density_run_end_to_end(write_config):
    document = {
        "physics": {"alpha": 1.0, "gamma": 1},
        "grid": {"n": 64},
        "time": {"dt": 0.002, "t_end": 5.0, "record_every": 50},
        "ic": {
            "u_preset": "taylor_green",
            "u_params": {"amplitude": 0.25},
            "rho_preset": "single_mode",
            "rho_params": {"amplitude": 0.1},
        },
    }
    assert cmd_check(write_config(document)) == EXIT_OK

    damped = run_simulation(parse_config(document).sim)
    assert damped.completed
    rescaled = [math.exp(r.t) * r.besov_u[0] for r in damped.records if r.t >= 1.0 - 1e-9]
    assert max(rescaled) / min(rescaled) <= 3
    assert bkm_report(damped.records).geometric_tail

    undamped = apply_override(apply_override(document, "physics.alpha", 0.0), "grid.n", 128)
    undamped = apply_override(undamped, "time.record_every", 500)
    control = run_simulation(parse_config(undamped).sim)
    assert control.completed
    growth = [r.grad_u_inf for r in control.records if r.t >= 1.0 - 1e-9]
    assert len(growth) == 5
    assert all(later > earlier for earlier, later in zip(growth, growth[1:]))


# -----------------------------------------------------------------------------
# verify
# -----------------------------------------------------------------------------


@pytest.fixture
def cheap_dynamics(monkeypatch):
    monkeypatch.setattr(verify, "taylor_green_error", lambda n: 0.0)
    monkeypatch.setattr(verify, "energy_balance_check", lambda n: 0.0)
    monkeypatch.setattr(verify, "lax_milgram_worst", lambda grid, instances: 1.0)


def test_verify_harmonic_checks_pass(cheap_dynamics):
    table = verify.run_verification("quick")
    assert table["passed"].all()
    assert set(table["check"]) >= {"partition_of_unity", "block_orthogonality", "bony_identity", "bernstein"}


def test_verify_detects_broken_partition(cheap_dynamics, capsys):
    def broken_bank(grid):
        bank = build_filter_bank(grid)
        phis = list(bank.phi_profiles)
        phis[1] = phis[1] * 1.01
        return replace(bank, phi_profiles=tuple(phis))

    table = verify.run_verification("quick", bank_builder=broken_bank)
    assert not table.set_index("check").loc["partition_of_unity", "passed"]
    assert verify.cmd_verify("quick", bank_builder=broken_bank) != 0
    assert "partition_of_unity" in capsys.readouterr().out


def test_verify_rejects_unknown_level():
    with pytest.raises(ValueError, match="level"):
        verify.run_verification("thorough")


@pytest.mark.slow
def test_verify_quick_passes():
    assert verify.cmd_verify("quick") == 0


# -----------------------------------------------------------------------------
# sweep
# -----------------------------------------------------------------------------


def test_sweep_input_errors(write_config, tmp_path):
    path = write_config(small_document())
    assert cmd_sweep(path, "physics.alpha", [], str(tmp_path / "s")) == EXIT_CONFIG
    assert cmd_sweep(path, "physics.alpha", [" ", ""], str(tmp_path / "s")) == EXIT_CONFIG
    assert cmd_sweep(path, "physics.beta", ["1"], str(tmp_path / "s")) == EXIT_CONFIG
    assert cmd_sweep(path, "physics.alpha", ["-1"], str(tmp_path / "s")) == EXIT_CONFIG
    assert not (tmp_path / "s").exists()


def test_sweep_over_damping(write_config, tmp_path):
    out = tmp_path / "sweep"
    code = cmd_sweep(write_config(small_document()), "physics.alpha", ["0.5", "1.0"], str(out), threads=2)
    assert code == EXIT_OK
    summary = json.loads((out / SWEEP_SUMMARY_FILE).read_text())
    assert summary["param"] == "physics.alpha"
    assert set(summary["runs"]) == {"0.5", "1.0"}
    for label, entry in summary["runs"].items():
        assert entry["exit_code"] == EXIT_OK
        assert entry["value"] == float(label)
        assert set(entry["conditions"]) == {"gamma1_general", "gamma1_2d"}
        assert (out / f"physics.alpha={label}" / RECORDS_FILE).exists()


def test_sweep_over_density_amplitude(write_config, tmp_path):
    document = small_document(ic={"u_params": {"amplitude": 0.1}, "rho_preset": "single_mode"})
    out = tmp_path / "sweep"
    code = cmd_sweep(write_config(document), "ic.rho_params.amplitude", ["0", "0.1", "0.2"], str(out), threads=2)
    assert code == EXIT_OK
    runs = json.loads((out / SWEEP_SUMMARY_FILE).read_text())["runs"]
    assert all(runs[label]["exit_code"] == EXIT_OK for label in ("0", "0.1", "0.2"))
    planar = [runs[label]["conditions"]["gamma1_2d"][0] for label in ("0", "0.1", "0.2")]
    assert planar[0] == 0.0
    assert planar[0] < planar[1] < planar[2]


# -----------------------------------------------------------------------------
# main
# -----------------------------------------------------------------------------


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    args = build_parser().parse_args(["sweep", "--config", "c.yaml", "--param", "physics.alpha",
                                      "--values", "0.5,1", "--out", "o"])
    assert args.values.split(",") == ["0.5", "1"]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert "0.1.0" in capsys.readouterr().out


def test_main_dispatches(write_config, tmp_path, capsys):
    path = write_config(small_document())
    assert main(["--log-level", "WARNING", "check", "--config", path]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["satisfied"]
    assert main(["run", "--config", path, "--out", str(tmp_path / "out"), "--no-progress"]) == EXIT_OK
    assert (tmp_path / "out" / SUMMARY_FILE).exists()
