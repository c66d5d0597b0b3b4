"""
Run configuration files.

Configs are YAML documents (JSON loads unchanged, being a YAML subset)
with the sections physics, grid, time, ic, pressure, track and smallness.
Unknown keys are rejected and every error names the offending dotted key.
"""

import copy
import logging
import math
import re
from dataclasses import dataclass

import yaml

from diagnostics.smallness import SmallnessParams
from dynamics.initial_conditions import DENSITY_PRESETS, VELOCITY_PRESETS
from dynamics.state import InitialCondition, SimConfig
from elliptic.pressure import PressureSolveParams
from fields.grid import GridSpec
from littlewood_paley.besov import BesovIndex

logger = logging.getLogger(__name__)

SCHEMA = {
    "physics": {"alpha": float, "gamma": int},
    "grid": {"n": int, "dealias_fraction": float},
    "time": {"dt": float, "t_end": float, "record_every": int},
    "ic": {"u_preset": str, "u_params": dict, "rho_preset": str, "rho_params": dict, "seed": int},
    "pressure": {"tol": float, "max_iter": int},
    "track": {"besov_indices": list},
    "smallness": {"K": float, "eta": float, "eta_2d": float, "delta": float},
}

_KEY_IN_MESSAGE = re.compile(r"^([a-z_]+\.[A-Za-z0-9_]+)")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}" if not message.startswith(key) else message)
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    sim: SimConfig
    smallness: SmallnessParams
    document: dict


def _check_type(key: str, value, expected):
    if expected is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif expected is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, expected)
    if not ok:
        raise ConfigError(key, f"expected {expected.__name__}, got {value!r}")


def validate_document(document) -> dict:
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigError("<root>", "config must be a mapping of sections")
    for section, body in document.items():
        if section not in SCHEMA:
            raise ConfigError(section, f"unknown section, expected one of {sorted(SCHEMA)}")
        if not isinstance(body, dict):
            raise ConfigError(section, "section must be a mapping")
        for key, value in body.items():
            dotted = f"{section}.{key}"
            if key not in SCHEMA[section]:
                raise ConfigError(dotted, f"unknown key, expected one of {sorted(SCHEMA[section])}")
            if value is None and dotted in ("smallness.eta", "smallness.eta_2d"):
                continue
            _check_type(dotted, value, SCHEMA[section][key])
    return document


def _build(section: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValueError as e:
        match = _KEY_IN_MESSAGE.match(str(e))
        raise ConfigError(match.group(1) if match else section, str(e)) from e


def _besov_indices(raw: list) -> tuple:
    indices = []
    for i, triple in enumerate(raw):
        try:
            idx = BesovIndex.parse(triple)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"track.besov_indices[{i}]", str(e)) from e
        if not idx.lipschitz_embedding(2):
            logger.warning("tracked index %s does not embed in Lipschitz functions", idx.label)
        indices.append(idx)
    if not indices:
        raise ConfigError("track.besov_indices", "need at least one Besov index")
    return tuple(indices)


def parse_config(document) -> RunConfig:
    """Validate a config document and build the run's dataclasses."""
    document = validate_document(copy.deepcopy(document))
    section = lambda name: document.get(name, {})

    physics = section("physics")
    grid = _build("grid", GridSpec, **section("grid"))
    ic_doc = dict(section("ic"))
    if ic_doc.get("u_preset", "taylor_green") not in VELOCITY_PRESETS:
        raise ConfigError("ic.u_preset", f"unknown preset {ic_doc['u_preset']!r}, expected one of {VELOCITY_PRESETS}")
    if ic_doc.get("rho_preset", "constant") not in DENSITY_PRESETS:
        raise ConfigError("ic.rho_preset", f"unknown preset {ic_doc['rho_preset']!r}, expected one of {DENSITY_PRESETS}")
    ic = _build("ic", InitialCondition, **ic_doc)
    pressure = _build("pressure", PressureSolveParams, **section("pressure"))
    track = section("track")
    indices = _besov_indices(track["besov_indices"]) if "besov_indices" in track else None
    time = section("time")

    kwargs = dict(physics, grid=grid, ic=ic, pressure=pressure, **time)
    if indices is not None:
        kwargs["besov_indices"] = indices
    sim = _build("physics", SimConfig, **kwargs)
    smallness = _build("smallness", SmallnessParams, **section("smallness"))
    return RunConfig(sim=sim, smallness=smallness, document=document)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r") as file:
            document = yaml.safe_load(file)
    except OSError as e:
        raise ConfigError("<file>", f"cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError("<file>", f"cannot parse {path}: {e}") from e
    return parse_config(document)


def apply_override(document: dict, dotted_key: str, value) -> dict:
    """
    Copy of document with one dotted key replaced, e.g. physics.alpha or ic.rho_params.amplitude.
    """
    parts = dotted_key.split(".")
    if len(parts) < 2 or parts[0] not in SCHEMA or parts[1] not in SCHEMA[parts[0]]:
        raise ConfigError(dotted_key, "not a known config key")
    if len(parts) > 2 and SCHEMA[parts[0]][parts[1]] is not dict:
        raise ConfigError(dotted_key, f"{parts[0]}.{parts[1]} has no sub-keys")
    updated = copy.deepcopy(document)
    node = updated
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(dotted_key, f"{part} is not a mapping")
    node[parts[-1]] = value
    return updated


def parse_value(text: str):
    """Parse one sweep value with YAML scalar rules; 'inf' stays a float infinity."""
    value = yaml.safe_load(text)
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
        return math.inf
    return value
