"""Sensor-validation metrics and their weighted consolidation.

The stack compares measured currents against a physics oracle I = V / R_sc,
quantifies per-segment drift and step linearity, cross-checks decimated
recordings against block integration of the raw stream, and merges the error
dimensions into a single calibration confidence score (CCCS).

Error saturation inside the CCCS is deliberate: deviation indices can reach
hundreds of thousands of percent in extreme fault regimes, so each error is
expressed as a fraction and capped at 1 before weighting, keeping the score
inside [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fidelity import SampledSignal

CDI_DIVISOR_FLOOR_A = 1e-9

_WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class SegmentStats:
    """Mean, population standard deviation, and count of one segment."""

    mean: float
    std: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise DomainError(f"count must be >= 1, got {self.count!r}")
        if self.std < 0:
            raise DomainError(f"std must be nonnegative, got {self.std!r}")

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "SegmentStats":
        x = np.asarray(samples, dtype=float)
        if x.size == 0:
            raise DomainError("segment must be nonempty")
        # population definition, no Bessel correction
        return cls(mean=float(x.mean()), std=float(x.std(ddof=0)), count=int(x.size))


@dataclass(frozen=True)
class CalibrationWeights:
    w1: float
    w2: float
    w3: float

    def __post_init__(self) -> None:
        ws = (self.w1, self.w2, self.w3)
        if any(w < 0 for w in ws):
            raise DomainError(f"weights must be nonnegative, got {ws}")
        if abs(sum(ws) - 1.0) > _WEIGHT_SUM_TOL:
            raise DomainError(f"weights must sum to 1, got {sum(ws)!r}")


WEIGHTING_SCENARIOS = {
    "transient_dominant": CalibrationWeights(0.1, 0.8, 0.1),
    "steady_state": CalibrationWeights(0.45, 0.45, 0.1),
    "balanced": CalibrationWeights(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
}


def weighting_scenario(name: str) -> CalibrationWeights:
    """Preset (w1, w2, w3) for a named weighting scenario."""
    try:
        return WEIGHTING_SCENARIOS[name]
    except KeyError:
        raise DomainError(
            f"unknown weighting scenario {name!r}; known: {sorted(WEIGHTING_SCENARIOS)}"
        ) from None


@dataclass(frozen=True)
class CalibrationReport:
    cdi_mean_pct: float
    gamma: float
    rmd: float
    nlr: float
    redundancy_error_pct: float
    cccs: float
    scenario: str
    excluded_samples: int

    def to_dict(self) -> dict:
        return {
            "cdi_mean_pct": self.cdi_mean_pct,
            "gamma": self.gamma,
            "rmd": self.rmd,
            "nlr": self.nlr,
            "redundancy_error_pct": self.redundancy_error_pct,
            "cccs": self.cccs,
            "scenario": self.scenario,
            "excluded_samples": self.excluded_samples,
        }


def expected_current(v_measured: float, r_sc: float) -> float:
    """Physics oracle I = V / R_sc for the characterized short-circuit resistance."""
    if r_sc <= 0:
        raise DomainError(f"r_sc must be positive, got {r_sc!r}")
    return v_measured / r_sc


def cdi(i_measured: float, i_expected: float, *, floor: float = CDI_DIVISOR_FLOOR_A) -> float:
    """Calibration deviation |(measured - expected) / expected| * 100 percent."""
    if abs(i_expected) < floor:
        raise DomainError(
            f"expected current {i_expected!r} A below divisor floor {floor!r} A; sample undefined"
        )
    return abs((i_measured - i_expected) / i_expected) * 100.0


def cdi_series(
    i_measured: np.ndarray,
    i_expected: np.ndarray,
    *,
    floor: float = CDI_DIVISOR_FLOOR_A,
) -> tuple[np.ndarray, int]:
    """Per-sample CDI over a series, excluding undefined samples.

    Samples whose expected current sits below the divisor floor are dropped;
    the exclusion count is returned alongside the defined values.
    """
    im = np.asarray(i_measured, dtype=float)
    ie = np.asarray(i_expected, dtype=float)
    if im.shape != ie.shape:
        raise DomainError("measured and expected series must have equal length")
    defined = np.abs(ie) >= floor
    values = np.abs((im[defined] - ie[defined]) / ie[defined]) * 100.0
    return values, int((~defined).sum())


def regime_ratio(cdi_extreme_mean: float, cdi_nominal_mean: float) -> float:
    """Scaling factor between fault-intensity regimes, extreme over nominal."""
    if cdi_nominal_mean <= 0:
        raise DomainError(f"nominal CDI mean must be positive, got {cdi_nominal_mean!r}")
    return cdi_extreme_mean / cdi_nominal_mean


def rmd(segment: np.ndarray) -> float:
    """Relative measurement drift: population std over mean of a segment."""
    stats = SegmentStats.from_samples(segment)
    if stats.mean == 0:
        raise DomainError("RMD undefined for a zero-mean segment")
    return stats.std / stats.mean


def nlr(delta_i_measured: float, delta_i_ideal: float) -> float:
    """Normalized linearity residual |(measured step - ideal step) / ideal step|."""
    if delta_i_ideal == 0:
        raise DomainError("ideal step must be nonzero")
    return abs((delta_i_measured - delta_i_ideal) / delta_i_ideal)


def redundancy_error(
    high_res: SampledSignal,
    low_res: SampledSignal,
    *,
    ref_floor: float = CDI_DIVISOR_FLOOR_A,
) -> float:
    """Signed mean relative difference (percent) between block-integrated
    high-rate samples and an aligned low-rate recording.

    The low-rate interval must be an integer multiple of the high-rate one
    and both streams must share their start instant; each low-rate value is
    compared against the mean of the high-rate samples it spans.
    """
    ratio = low_res.t_s / high_res.t_s
    block = int(round(ratio))
    if block < 1 or abs(ratio - block) > 1e-9 * ratio:
        raise DomainError(
            f"low-res interval {low_res.t_s!r} s is not an integer multiple "
            f"of high-res interval {high_res.t_s!r} s"
        )
    n_blocks = min(low_res.n, high_res.n // block)
    if n_blocks < 1:
        raise DomainError("streams too short for a single overlapping block")
    integrated = high_res.values[: n_blocks * block].reshape(n_blocks, block).mean(axis=1)
    low = low_res.values[:n_blocks]
    usable = np.abs(low) >= ref_floor
    if not usable.any():
        raise DomainError("every low-res reference value sits below the divisor floor")
    rel = (integrated[usable] - low[usable]) / low[usable]
    return float(rel.mean() * 100.0)


def cccs(
    cdi_avg_pct: float,
    rmd_avg: float,
    nlr_avg: float,
    w: CalibrationWeights,
) -> float:
    """Consolidated calibration confidence score in [0, 1].

    Each error enters as a fraction saturated at 1 (CDI is percent / 100),
    then the weighted complements are summed:
    w1 (1 - cdi') + w2 (1 - rmd') + w3 (1 - nlr').
    """
    for name, e in (("cdi_avg_pct", cdi_avg_pct), ("rmd_avg", rmd_avg), ("nlr_avg", nlr_avg)):
        if not (math.isfinite(e) and e >= 0):
            raise DomainError(f"{name} must be finite and nonnegative, got {e!r}")
    cdi_sat = min(cdi_avg_pct / 100.0, 1.0)
    rmd_sat = min(rmd_avg, 1.0)
    nlr_sat = min(nlr_avg, 1.0)
    return w.w1 * (1.0 - cdi_sat) + w.w2 * (1.0 - rmd_sat) + w.w3 * (1.0 - nlr_sat)
