"""TOML configuration for scenarios and tuning jobs.

Every key carries its unit in its name (``density_kg_m3``, ``t_end_s``) so a
config file reads unambiguously.  Angles and wheel speeds accept exactly one
of two spellings (``rake_angle_deg`` or ``rake_angle_rad``; ``wheel_speed_rpm``
or ``wheel_speed_rad_s``).  Unknown sections or keys are rejected by name
rather than silently ignored, since a typo in a config would otherwise turn
into a silently different experiment.

All sections and keys are optional; omitted values fall back to the package
defaults, so ``{}`` parses to the same scenario as :func:`default_scenario`.
"""

from __future__ import annotations

import math
from dataclasses import fields, replace
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .control import RPM_TO_RAD_S, Gains
from .dynamics import (
    DisturbanceModel,
    ExcavatorParams,
    ExcavatorState,
    WheelConfig,
)
from .integrator import IntegratorConfig
from .regolith import SoilProperties
from .sim import Scenario
from .tuning import CostWeights, TuningSpec

__all__ = [
    "ConfigError",
    "default_scenario",
    "load_scenario",
    "loads_scenario",
    "load_tuning_spec",
    "loads_tuning_spec",
    "write_gains",
    "default_config_path",
]


class ConfigError(ValueError):
    """A config file failed validation; the message names section and key."""


def default_scenario() -> Scenario:
    """The stock single-run scenario: all package defaults, disturbance off."""
    return Scenario()


def default_config_path() -> Path:
    """Path of the packaged TOML file that spells out every default."""
    return Path(resources.files("bucketwheel").joinpath("data/default.toml"))


def _float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _bool(value, where: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{where} must be true or false, got {value!r}")
    return value


def _str(value, where: str) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{where} must be a string, got {value!r}")
    return value


def _reject_unknown(data: dict, section: str) -> None:
    if data:
        key = sorted(data)[0]
        raise ConfigError(f"unknown key {section}.{key}")


def _section(raw: dict, name: str) -> dict:
    value = raw.pop(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be a table")
    return dict(value)


def _pop_floats(data: dict, section: str, mapping: dict[str, str]) -> dict:
    out = {}
    for key, field_name in mapping.items():
        if key in data:
            out[field_name] = _float(data.pop(key), f"{section}.{key}")
    return out


def _exclusive(data: dict, section: str, key_a: str, key_b: str) -> None:
    if key_a in data and key_b in data:
        raise ConfigError(f"{section}: give {key_a} or {key_b}, not both")


_SOIL_KEYS = {
    "density_kg_m3": "density",
    "gravity_m_s2": "gravity",
    "cohesion_pa": "cohesion",
    "water_fraction": "water_fraction",
    "specific_heat_j_kg_c": "specific_heat",
    "surface_temp_c": "surface_temp",
    "extraction_temp_c": "extraction_temp",
}

_WHEEL_KEYS = {
    "diameter_m": "diameter",
    "blade_width_m": "blade_width",
    "tool_length_m": "tool_length",
    "wheel_mass_kg": "wheel_mass",
    "inertia_kg_m2": "inertia",
    "max_cut_depth_m": "max_cut_depth",
    "engagement_factor": "engagement_factor",
}

_GAIN_KEYS = {"k_x": "k_x", "k_y": "k_y", "k_vy": "k_vy", "k_1": "k_1", "k_2": "k_2"}

_STATE_KEYS = {
    "x_m": "x",
    "y_m": "y",
    "vx_m_s": "vx",
    "vy_m_s": "vy",
    "theta1_rad": "theta1",
    "omega1_rad_s": "omega1",
    "theta2_rad": "theta2",
    "omega2_rad_s": "omega2",
}


def _wrap(section: str, factory, kwargs: dict):
    """Build a dataclass, rephrasing its ValueError with the section name."""
    try:
        return factory(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{section}: {exc}") from None


def _load_soil(data: dict) -> SoilProperties:
    out = _pop_floats(data, "soil", _SOIL_KEYS)
    _reject_unknown(data, "soil")
    return _wrap("soil", SoilProperties, out)


def _load_wheel(data: dict, section: str, default: WheelConfig) -> WheelConfig:
    out = _pop_floats(data, section, _WHEEL_KEYS)
    if "n_buckets" in data:
        out["n_buckets"] = _int(data.pop("n_buckets"), f"{section}.n_buckets")
    _exclusive(data, section, "rake_angle_deg", "rake_angle_rad")
    if "rake_angle_deg" in data:
        out["rake_angle"] = math.radians(
            _float(data.pop("rake_angle_deg"), f"{section}.rake_angle_deg"))
    elif "rake_angle_rad" in data:
        out["rake_angle"] = _float(data.pop("rake_angle_rad"), f"{section}.rake_angle_rad")
    _reject_unknown(data, section)
    try:
        return replace(default, **out)
    except ValueError as exc:
        raise ConfigError(f"{section}: {exc}") from None


def _load_gains(data: dict) -> Gains:
    out = _pop_floats(data, "gains", _GAIN_KEYS)
    _exclusive(data, "gains", "wheel_speed_rpm", "wheel_speed_rad_s")
    if "wheel_speed_rpm" in data:
        out["wheel_speed_setpoint"] = RPM_TO_RAD_S * _float(
            data.pop("wheel_speed_rpm"), "gains.wheel_speed_rpm")
    elif "wheel_speed_rad_s" in data:
        out["wheel_speed_setpoint"] = _float(
            data.pop("wheel_speed_rad_s"), "gains.wheel_speed_rad_s")
    _reject_unknown(data, "gains")
    return _wrap("gains", Gains, out)


def _load_disturbance(data: dict) -> DisturbanceModel:
    out = {}
    if "enabled" in data:
        out["enabled"] = _bool(data.pop("enabled"), "disturbance.enabled")
    if "seed" in data:
        out["seed"] = _int(data.pop("seed"), "disturbance.seed")
    _reject_unknown(data, "disturbance")
    return DisturbanceModel(**out)


def _load_integrator(data: dict) -> IntegratorConfig:
    out = _pop_floats(data, "integrator", {
        "t_end_s": "t_end",
        "output_step_s": "output_step",
        "rel_tol": "rel_tol",
        "abs_tol": "abs_tol",
        "max_step_s": "max_step",
    })
    if "method" in data:
        out["method"] = _str(data.pop("method"), "integrator.method")
    _reject_unknown(data, "integrator")
    return _wrap("integrator", IntegratorConfig, out)


def _load_state(data: dict) -> ExcavatorState:
    out = _pop_floats(data, "initial_state", _STATE_KEYS)
    _reject_unknown(data, "initial_state")
    return ExcavatorState(**out)


def _scenario_from_dict(raw: dict) -> Scenario:
    raw = dict(raw)
    soil = _load_soil(_section(raw, "soil"))

    excavator = _section(raw, "excavator")
    chassis = {}
    if "chassis_mass_kg" in excavator:
        chassis["chassis_mass"] = _float(excavator.pop("chassis_mass_kg"),
                                         "excavator.chassis_mass_kg")
    _reject_unknown(excavator, "excavator")

    defaults = ExcavatorParams()
    wheel_1 = _load_wheel(_section(raw, "wheel1"), "wheel1", defaults.wheel_1)
    wheel_2 = _load_wheel(_section(raw, "wheel2"), "wheel2", defaults.wheel_2)
    params = _wrap("excavator", ExcavatorParams,
                   dict(soil=soil, wheel_1=wheel_1, wheel_2=wheel_2, **chassis))

    gains = _load_gains(_section(raw, "gains"))
    disturbance = _load_disturbance(_section(raw, "disturbance"))
    integrator = _load_integrator(_section(raw, "integrator"))
    state = _load_state(_section(raw, "initial_state"))
    _reject_unknown(raw, "top level")
    return Scenario(params=params, gains=gains, disturbance=disturbance,
                    integrator=integrator, initial_state=state)


def loads_scenario(text: str) -> Scenario:
    """Parse a scenario from TOML text."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    return _scenario_from_dict(raw)


def load_scenario(path) -> Scenario:
    """Load a scenario config file; missing sections use package defaults."""
    return loads_scenario(Path(path).read_text())


def _load_weights(data: dict) -> CostWeights:
    out = _pop_floats(data, "tuning.weights", {
        "drift": "drift", "settle": "settle",
        "liftoff": "liftoff", "effort": "effort",
    })
    _reject_unknown(data, "tuning.weights")
    return _wrap("tuning.weights", CostWeights, out)


def _load_bounds(data: dict) -> dict[str, tuple[float, float]]:
    bounds = {}
    for name in list(data):
        pair = data.pop(name)
        if (not isinstance(pair, list) or len(pair) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)):
            raise ConfigError(
                f"tuning.bounds.{name} must be a [low, high] pair of numbers")
        bounds[name] = (float(pair[0]), float(pair[1]))
    return bounds


def loads_tuning_spec(text: str) -> TuningSpec:
    """Parse a tuning job from TOML text.  The [tuning] table is required."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    raw = dict(raw)
    if "tuning" not in raw:
        raise ConfigError("missing [tuning] table")
    data = _section(raw, "tuning")
    _reject_unknown(raw, "top level")

    out: dict = {}
    if "method" in data:
        out["method"] = _str(data.pop("method"), "tuning.method")
    if "budget" in data:
        out["budget"] = _int(data.pop("budget"), "tuning.budget")
    if "eval_horizon_s" in data:
        out["eval_horizon"] = _float(data.pop("eval_horizon_s"), "tuning.eval_horizon_s")
    out["weights"] = _load_weights(_section(data, "weights"))
    bounds_raw = _section(data, "bounds")
    if not bounds_raw:
        raise ConfigError("tuning.bounds must name at least one gain")
    out["bounds"] = _load_bounds(bounds_raw)
    _reject_unknown(data, "tuning")
    return _wrap("tuning", TuningSpec, out)


def load_tuning_spec(path) -> TuningSpec:
    """Load a tuning job description from a TOML file."""
    return loads_tuning_spec(Path(path).read_text())


def write_gains(path, gains: Gains) -> None:
    """Write gains as a [gains] TOML fragment that parses back bit-exact.

    ``repr`` of a float round-trips exactly through TOML, so a tuned result
    written here and reloaded reproduces the same rollouts.
    """
    lines = ["[gains]"]
    for f in fields(Gains):
        key = "wheel_speed_rad_s" if f.name == "wheel_speed_setpoint" else f.name
        lines.append(f"{key} = {float(getattr(gains, f.name))!r}")
    Path(path).write_text("\n".join(lines) + "\n")
