"""Analysis toolkit for governed short-circuit fault waveforms.

Simulates, ingests, fits, and scores time-resolved fault recordings from a
diode-clamped supply rail: closed-form transient laws, clamp transfer
modeling, spectral signal-fidelity metrics, sensor-calibration scoring, and
bounded-fault characterization, with a CLI that emits machine-readable
reports, plot-ready tables, and rendered figures.
"""

__version__ = "0.1.0"

from .bounds import BoundedFaultReport, FaultExtrema, characterize_fault
from .calibration import CalibrationReport, CalibrationWeights, cccs, weighting_scenario
from .clamp import ClampNetwork, DiodeSpec, clamp_output, stabilized_voltage
from .errors import DataFormatError, DomainError
from .fidelity import SampledSignal, SpectralSummary, ValidationWeights, summarize
from .model import ModelParams, TransitionState, transition_state
from .pipeline import (
    ExperimentLog,
    FitResult,
    SimConfig,
    fit_exponential_decay,
    parse_log,
    segment_phases,
    simulate_experiment,
    write_log,
)

__all__ = [
    "__version__",
    "BoundedFaultReport",
    "CalibrationReport",
    "CalibrationWeights",
    "ClampNetwork",
    "DataFormatError",
    "DiodeSpec",
    "DomainError",
    "ExperimentLog",
    "FaultExtrema",
    "FitResult",
    "ModelParams",
    "SampledSignal",
    "SimConfig",
    "SpectralSummary",
    "TransitionState",
    "ValidationWeights",
    "cccs",
    "characterize_fault",
    "clamp_output",
    "fit_exponential_decay",
    "parse_log",
    "segment_phases",
    "simulate_experiment",
    "stabilized_voltage",
    "summarize",
    "transition_state",
    "weighting_scenario",
    "write_log",
]
