"""Scenario configuration: JSON schema, validation, overrides."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .layout import GEOMETRY_KINDS

__all__ = [
    "GeometryConfig",
    "DriveConfig",
    "InitialStateConfig",
    "TimeConfig",
    "SweepAxis",
    "ScenarioConfig",
    "load_config",
    "save_config",
    "config_to_dict",
    "config_from_dict",
    "apply_overrides",
]

DEFAULT_OUTPUTS = [
    "concurrence",
    "p_gg",
    "p_beta",
    "p_ee",
    "intensity",
    "g2_zero",
    "mandel_q",
]

SCALAR_OBSERVABLES = DEFAULT_OUTPUTS + [
    "p_psi_plus",
    "p_psi_minus",
    "rate_e_plus",
    "rate_e_minus",
    "rate_plus_g",
    "rate_minus_g",
]

SWEEPABLE_PARAMETERS = (
    "drive.rabi",
    "drive.detuning",
    "geometry.spacing_over_pi",
    "geometry.gamma0",
)

NAMED_STATES = ("gg", "ee", "beta")


@dataclass
class GeometryConfig:
    kind: str = "nested"
    spacing_over_pi: float = 0.01
    gamma0: float = 1.0


@dataclass
class DriveConfig:
    rabi: float = 0.0
    detuning: float = 0.0


@dataclass
class InitialStateConfig:
    named: str | None = "gg"
    amplitudes: list | None = None  # four [re, im] pairs (or plain reals)


@dataclass
class TimeConfig:
    t_max: float = 100.0
    samples: int = 201


@dataclass
class SweepAxis:
    parameter: str
    min: float
    max: float
    points: int


@dataclass
class ScenarioConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    drive: DriveConfig = field(default_factory=DriveConfig)
    initial_state: InitialStateConfig = field(default_factory=InitialStateConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    outputs: list = field(default_factory=lambda: list(DEFAULT_OUTPUTS))
    sweep: list = field(default_factory=list)  # list of SweepAxis, at most 2


def _require_number(value, path: str, integer: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if integer and not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}: value must be finite")
    return int(value) if integer else float(value)


def _check_keys(d: dict, allowed: tuple, path: str) -> None:
    for key in d:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}: unknown key (allowed: {', '.join(allowed)})")


def _geometry_from(d: dict, path: str) -> GeometryConfig:
    _check_keys(d, ("kind", "spacing_over_pi", "gamma0"), path)
    g = GeometryConfig()
    if "kind" in d:
        if d["kind"] not in GEOMETRY_KINDS:
            raise ConfigError(f"{path}.kind: unknown geometry {d['kind']!r}")
        g.kind = d["kind"]
    if "spacing_over_pi" in d:
        g.spacing_over_pi = _require_number(d["spacing_over_pi"], f"{path}.spacing_over_pi")
        if g.spacing_over_pi < 0:
            raise ConfigError(f"{path}.spacing_over_pi: must be >= 0")
    if "gamma0" in d:
        g.gamma0 = _require_number(d["gamma0"], f"{path}.gamma0")
        if g.gamma0 <= 0:
            raise ConfigError(f"{path}.gamma0: must be > 0")
    return g


def _drive_from(d: dict, path: str) -> DriveConfig:
    _check_keys(d, ("rabi", "detuning"), path)
    out = DriveConfig()
    if "rabi" in d:
        out.rabi = _require_number(d["rabi"], f"{path}.rabi")
        if out.rabi < 0:
            raise ConfigError(f"{path}.rabi: must be >= 0")
    if "detuning" in d:
        out.detuning = _require_number(d["detuning"], f"{path}.detuning")
    return out


def _initial_state_from(d: dict, path: str) -> InitialStateConfig:
    _check_keys(d, ("named", "amplitudes"), path)
    out = InitialStateConfig()
    if "named" in d and "amplitudes" in d:
        raise ConfigError(f"{path}: give either 'named' or 'amplitudes', not both")
    if "amplitudes" in d:
        amps = d["amplitudes"]
        if not isinstance(amps, list) or not amps:
            raise ConfigError(f"{path}.amplitudes: expected a nonempty list")
        parsed = []
        for i, a in enumerate(amps):
            if isinstance(a, list):
                if len(a) != 2:
                    raise ConfigError(f"{path}.amplitudes[{i}]: expected [re, im]")
                parsed.append([
                    _require_number(a[0], f"{path}.amplitudes[{i}][0]"),
                    _require_number(a[1], f"{path}.amplitudes[{i}][1]"),
                ])
            else:
                parsed.append([_require_number(a, f"{path}.amplitudes[{i}]"), 0.0])
        out.named = None
        out.amplitudes = parsed
    elif "named" in d:
        if d["named"] not in NAMED_STATES:
            raise ConfigError(f"{path}.named: unknown state {d['named']!r}")
        out.named = d["named"]
    return out


def _time_from(d: dict, path: str) -> TimeConfig:
    _check_keys(d, ("t_max", "samples"), path)
    out = TimeConfig()
    if "t_max" in d:
        out.t_max = _require_number(d["t_max"], f"{path}.t_max")
        if out.t_max <= 0:
            raise ConfigError(f"{path}.t_max: must be > 0")
    if "samples" in d:
        out.samples = _require_number(d["samples"], f"{path}.samples", integer=True)
        if out.samples < 2:
            raise ConfigError(f"{path}.samples: need at least 2 samples")
    return out


def _axis_from(d: dict, path: str) -> SweepAxis:
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    _check_keys(d, ("parameter", "min", "max", "points"), path)
    for key in ("parameter", "min", "max", "points"):
        if key not in d:
            raise ConfigError(f"{path}.{key}: required")
    if d["parameter"] not in SWEEPABLE_PARAMETERS:
        raise ConfigError(
            f"{path}.parameter: {d['parameter']!r} is not sweepable "
            f"(choose from {', '.join(SWEEPABLE_PARAMETERS)})"
        )
    axis = SweepAxis(
        parameter=d["parameter"],
        min=_require_number(d["min"], f"{path}.min"),
        max=_require_number(d["max"], f"{path}.max"),
        points=_require_number(d["points"], f"{path}.points", integer=True),
    )
    if axis.points < 1:
        raise ConfigError(f"{path}.points: must be >= 1")
    if axis.points > 1 and axis.max <= axis.min:
        raise ConfigError(f"{path}: max must exceed min for a multi-point sweep")
    return axis


def config_from_dict(d: dict) -> ScenarioConfig:
    if not isinstance(d, dict):
        raise ConfigError("top level: expected a JSON object")
    _check_keys(
        d, ("geometry", "drive", "initial_state", "time", "outputs", "sweep"), "config"
    )
    cfg = ScenarioConfig()
    if "geometry" in d:
        cfg.geometry = _geometry_from(d["geometry"], "geometry")
    if "drive" in d:
        cfg.drive = _drive_from(d["drive"], "drive")
    if "initial_state" in d:
        cfg.initial_state = _initial_state_from(d["initial_state"], "initial_state")
    if "time" in d:
        cfg.time = _time_from(d["time"], "time")
    if "outputs" in d:
        outs = d["outputs"]
        if not isinstance(outs, list) or not all(isinstance(o, str) for o in outs):
            raise ConfigError("outputs: expected a list of observable names")
        for o in outs:
            if o not in SCALAR_OBSERVABLES:
                raise ConfigError(f"outputs: unknown observable {o!r}")
        cfg.outputs = list(outs)
    if "sweep" in d:
        raw = d["sweep"]
        axes = raw if isinstance(raw, list) else [raw]
        if len(axes) > 2:
            raise ConfigError("sweep: at most two sweep axes are supported")
        cfg.sweep = [_axis_from(a, f"sweep[{i}]") for i, a in enumerate(axes)]
    return cfg


def config_to_dict(cfg: ScenarioConfig) -> dict:
    d = {
        "geometry": {
            "kind": cfg.geometry.kind,
            "spacing_over_pi": cfg.geometry.spacing_over_pi,
            "gamma0": cfg.geometry.gamma0,
        },
        "drive": {"rabi": cfg.drive.rabi, "detuning": cfg.drive.detuning},
        "time": {"t_max": cfg.time.t_max, "samples": cfg.time.samples},
        "outputs": list(cfg.outputs),
    }
    if cfg.initial_state.amplitudes is not None:
        d["initial_state"] = {"amplitudes": cfg.initial_state.amplitudes}
    else:
        d["initial_state"] = {"named": cfg.initial_state.named}
    if cfg.sweep:
        d["sweep"] = [
            {"parameter": a.parameter, "min": a.min, "max": a.max, "points": a.points}
            for a in cfg.sweep
        ]
    return d


def load_config(path) -> ScenarioConfig:
    """Parse and validate a JSON scenario configuration."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    return config_from_dict(data)


def save_config(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(
        json.dumps(config_to_dict(cfg), indent=2) + "\n", encoding="utf-8"
    )


def apply_overrides(cfg: ScenarioConfig, overrides: dict) -> ScenarioConfig:
    """Apply dotted-path overrides such as {'drive.rabi': '2.0'}.

    Values may be JSON literals or raw strings; unknown paths are rejected.
    """
    d = config_to_dict(cfg)
    for raw_path, raw_value in overrides.items():
        try:
            value = json.loads(raw_value) if isinstance(raw_value, str) else raw_value
        except json.JSONDecodeError:
            value = raw_value
        parts = raw_path.split(".")
        node = d
        for part in parts[:-1]:
            if not isinstance(node, dict) or part not in node:
                raise ConfigError(f"invalid override path {raw_path!r}")
            node = node[part]
        if not isinstance(node, dict):
            raise ConfigError(f"invalid override path {raw_path!r}")
        node[parts[-1]] = value  # unknown keys are rejected by validation below
    return config_from_dict(d)
