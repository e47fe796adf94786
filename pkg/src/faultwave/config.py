"""Toolkit configuration: one TOML file holds every tunable.

Search order: an explicit path argument, then the FAULTWAVE_CONFIG environment
variable, then built-in defaults. File values deep-merge over the defaults;
unknown keys are rejected so typos fail loudly instead of silently reverting
to a default.
"""

from __future__ import annotations

import copy
import os
from pathlib import Path
from typing import Any

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .calibration import CalibrationWeights, weighting_scenario
from .clamp import ClampNetwork, DiodeSpec
from .errors import DomainError
from .fidelity import ValidationWeights
from .model import ModelParams
from .pipeline import SimConfig

CONFIG_ENV_VAR = "FAULTWAVE_CONFIG"

DEFAULTS: dict[str, Any] = {
    "fidelity": {
        "bins": 256,
        "window": "hann",
        "window_fraction": 0.10,
        "hop_fraction": 0.50,
        "window_len": 0,   # 0 means derive from window_fraction
        "hop_len": 0,      # 0 means derive from hop_fraction
        "stability_rel_tol": 0.20,
        "weights": [0.2, 0.2, 0.2, 0.2, 0.2],
        "dominant_include_dc": True,
    },
    "calibration": {
        "scenario": "balanced",
        "cdi_floor_a": 1e-9,
        # declared (delta_measured_a, delta_ideal_a) pairs; never inferred
        "step_pairs": [],
        "scenarios": {
            "transient_dominant": [0.1, 0.8, 0.1],
            "steady_state": [0.45, 0.45, 0.1],
            "balanced": [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        },
    },
    "clamp": {
        "preset": "1N5408",
        "vf": 1.2,
        "i_s": 1e-9,
        "n": 1.0,
        "v_t": 0.02585,
        "c_j_f": 40e-12,
        "r_dyn": 0.02,
        "n_clamp_diodes": 2,
        "path_len": 2,
    },
    "fit": {
        "rel_tol": 1e-10,
        "max_iter": 200,
        "current_guard_a": 1e-6,
        "plateau_tol": 0.05,
    },
    "metrics": {
        "k_default_per_s": 1000.0,
        "t_fault_s": 180.0,
    },
    "simulate": {
        "v0": 1.67,
        "r0": 7.9523809523809526,
        "k": 1000.0,
        "v_short_min": 0.073,
        "i_max": 13.01,
        "pre_s": 60.0,
        "fault_s": 180.0,
        "post_s": 60.0,
        "sampling_ms": 10,
        "block_size": 1,
        "noise_std_v": 0.0005,
        "noise_std_i": 0.01,
        "sensor_sensitivity": 0.1,
        "sensor_midpoint": 2.5,
        "adc_bits": 10,
        "adc_fullscale": 5.0,
        "quantize": True,
        "seed": 0,
        "supply_v": 2.5,
        "polarity": "forward",
        "trial": 1,
        "label_phases": True,
    },
}


def _merge(base: dict, override: dict, path: str = "") -> dict:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise DomainError(f"unknown config key {where!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise DomainError(f"config key {where!r} must be a table")
            # scenario tables may introduce user-named entries
            if key == "scenarios":
                merged[key] = {**base[key], **value}
            else:
                merged[key] = _merge(base[key], value, where)
        else:
            merged[key] = value
    return merged


def load_config(path: str | Path | None = None) -> dict[str, Any]:
    """Resolve the effective configuration dictionary."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return copy.deepcopy(DEFAULTS)
    path = Path(path)
    if not path.is_file():
        raise DomainError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        try:
            user = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise DomainError(f"config file {path} is not valid TOML: {exc}") from None
    return _merge(DEFAULTS, user)


def clamp_from_config(cfg: dict[str, Any]) -> ClampNetwork:
    c = cfg["clamp"]
    diode = DiodeSpec(vf=c["vf"], i_s=c["i_s"], n=c["n"], v_t=c["v_t"], c_j=c["c_j_f"])
    return ClampNetwork(
        conduction_path=(diode,) * int(c["path_len"]),
        r_dyn=c["r_dyn"],
        n_clamp_diodes=int(c["n_clamp_diodes"]),
    )


def validation_weights_from_config(cfg: dict[str, Any]) -> ValidationWeights:
    ws = cfg["fidelity"]["weights"]
    if len(ws) != 5:
        raise DomainError(f"fidelity.weights needs exactly 5 entries, got {len(ws)}")
    return ValidationWeights(*[float(w) for w in ws])


def calibration_weights_from_config(cfg: dict[str, Any], scenario: str | None = None) -> tuple[str, CalibrationWeights]:
    name = scenario or cfg["calibration"]["scenario"]
    table = cfg["calibration"]["scenarios"]
    if name in table:
        ws = table[name]
        if len(ws) != 3:
            raise DomainError(f"calibration scenario {name!r} needs 3 weights, got {len(ws)}")
        return name, CalibrationWeights(*[float(w) for w in ws])
    return name, weighting_scenario(name)


def sim_config_from_config(cfg: dict[str, Any], *, seed: int | None = None) -> SimConfig:
    s = cfg["simulate"]
    return SimConfig(
        model=ModelParams(v0=s["v0"], r0=s["r0"], k=s["k"]),
        clamp=clamp_from_config(cfg),
        pre_s=s["pre_s"],
        fault_s=s["fault_s"],
        post_s=s["post_s"],
        v_short_min=s["v_short_min"],
        i_max=s["i_max"],
        sampling_ms=int(s["sampling_ms"]),
        block_size=int(s["block_size"]),
        noise_std_v=s["noise_std_v"],
        noise_std_i=s["noise_std_i"],
        sensor_sensitivity=s["sensor_sensitivity"],
        sensor_midpoint=s["sensor_midpoint"],
        adc_bits=int(s["adc_bits"]),
        adc_fullscale=s["adc_fullscale"],
        quantize=bool(s["quantize"]),
        seed=int(s["seed"] if seed is None else seed),
        supply_v=s["supply_v"],
        polarity=s["polarity"],
        trial=int(s["trial"]),
        label_phases=bool(s["label_phases"]),
    )
