"""Experiment-log ingestion, phase segmentation, decimation, decay fitting,
and seeded synthesis of fault recordings.

The one log format is CSV with header

    t_s,voltage_v,current_a,phase,sampling_ms,trial,polarity,supply_v

where phase may be empty (then segmentation falls back to a current-threshold
rule), sampling_ms is one of {10, 50, 100}, and time is strictly increasing
within a trial. The simulator emits the same format, so every ingest path can
be exercised against synthetic recordings with known ground truth.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .clamp import ClampNetwork
from .errors import DataFormatError, DomainError
from .fidelity import SampledSignal
from .model import ModelParams

LOG_COLUMNS = ("t_s", "voltage_v", "current_a", "phase", "sampling_ms",
               "trial", "polarity", "supply_v")
PHASE_NAMES = ("pre", "fault", "post")
POLARITIES = ("forward", "reverse")
ALLOWED_SAMPLING_MS = (10, 50, 100)

CURRENT_GUARD_A = 1e-6      # resistance series drops samples with |i| below this
PLATEAU_TOL = 0.05          # collapse window ends once r is this close to its floor
K_DEFAULT_PER_S = 1000.0    # literature decay constant when no fit is available


@dataclass
class ExperimentLog:
    """Column-oriented log; one row per sample, possibly spanning trials."""

    t: np.ndarray
    v: np.ndarray
    i: np.ndarray
    phase: list[str]
    sampling_ms: np.ndarray
    trial: np.ndarray
    polarity: list[str]
    supply_v: np.ndarray

    @property
    def n_rows(self) -> int:
        return int(self.t.size)

    def trial_ids(self) -> list[int]:
        seen: dict[int, None] = {}
        for tr in self.trial:
            seen.setdefault(int(tr), None)
        return list(seen)

    def trial_view(self, trial_id: int) -> "ExperimentLog":
        mask = self.trial == trial_id
        if not mask.any():
            raise DomainError(f"trial {trial_id} not present in log")
        idx = np.nonzero(mask)[0]
        return ExperimentLog(
            t=self.t[idx],
            v=self.v[idx],
            i=self.i[idx],
            phase=[self.phase[j] for j in idx],
            sampling_ms=self.sampling_ms[idx],
            trial=self.trial[idx],
            polarity=[self.polarity[j] for j in idx],
            supply_v=self.supply_v[idx],
        )

    @property
    def t_s(self) -> float:
        """Sampling interval in seconds; defined for single-rate views."""
        rates = set(int(r) for r in self.sampling_ms)
        if len(rates) != 1:
            raise DomainError("sampling interval undefined across mixed rates")
        return rates.pop() / 1000.0


def _parse_float(text: str, line_no: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataFormatError(f"line {line_no}: {column} value {text!r} is not a number") from None
    if not math.isfinite(value):
        raise DataFormatError(f"line {line_no}: {column} value {text!r} is not finite")
    return value


def _parse_int(text: str, line_no: int, column: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise DataFormatError(f"line {line_no}: {column} value {text!r} is not an integer") from None


def parse_log(source: str | Path | io.TextIOBase) -> ExperimentLog:
    """Read and validate a CSV experiment log.

    Raises DataFormatError naming the offending line for malformed rows,
    unknown columns, out-of-set sampling rates, or non-monotone timestamps.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return parse_log(fh)

    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("no data rows: file is empty") from None
    header = [h.strip() for h in header]
    if header != list(LOG_COLUMNS):
        raise DataFormatError(
            f"header mismatch: expected {','.join(LOG_COLUMNS)}, got {','.join(header)}"
        )

    t, v, i, sampling, trial, supply = [], [], [], [], [], []
    phase: list[str] = []
    polarity: list[str] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(LOG_COLUMNS):
            raise DataFormatError(
                f"line {line_no}: expected {len(LOG_COLUMNS)} fields, got {len(row)}"
            )
        t.append(_parse_float(row[0], line_no, "t_s"))
        v.append(_parse_float(row[1], line_no, "voltage_v"))
        i.append(_parse_float(row[2], line_no, "current_a"))
        ph = row[3].strip().lower()
        if ph and ph not in PHASE_NAMES:
            raise DataFormatError(f"line {line_no}: phase {row[3]!r} not in {PHASE_NAMES}")
        phase.append(ph)
        ms = _parse_int(row[4], line_no, "sampling_ms")
        if ms not in ALLOWED_SAMPLING_MS:
            raise DataFormatError(
                f"line {line_no}: sampling_ms {ms} not in {ALLOWED_SAMPLING_MS}"
            )
        sampling.append(ms)
        trial.append(_parse_int(row[5], line_no, "trial"))
        pol = row[6].strip().lower()
        if pol not in POLARITIES:
            raise DataFormatError(f"line {line_no}: polarity {row[6]!r} not in {POLARITIES}")
        polarity.append(pol)
        supply.append(_parse_float(row[7], line_no, "supply_v"))

    if not t:
        raise DataFormatError("no data rows")

    log = ExperimentLog(
        t=np.array(t), v=np.array(v), i=np.array(i), phase=phase,
        sampling_ms=np.array(sampling, dtype=int), trial=np.array(trial, dtype=int),
        polarity=polarity, supply_v=np.array(supply),
    )
    _validate_log(log)
    return log


def _validate_log(log: ExperimentLog) -> None:
    # reconstruct per-row line numbers for monotonicity diagnostics
    line_of_row = {idx: idx + 2 for idx in range(log.n_rows)}
    last_t: dict[int, tuple[float, int]] = {}
    rate_of: dict[int, int] = {}
    for idx in range(log.n_rows):
        tr = int(log.trial[idx])
        ms = int(log.sampling_ms[idx])
        if tr in rate_of and rate_of[tr] != ms:
            raise DataFormatError(
                f"line {line_of_row[idx]}: trial {tr} mixes sampling_ms "
                f"{rate_of[tr]} and {ms}"
            )
        rate_of[tr] = ms
        if tr in last_t:
            prev, prev_line = last_t[tr]
            if log.t[idx] == prev:
                raise DataFormatError(
                    f"line {line_of_row[idx]}: duplicated timestamp {prev!r} in trial {tr}"
                )
            if log.t[idx] < prev:
                raise DataFormatError(
                    f"line {line_of_row[idx]}: time goes backwards in trial {tr} "
                    f"({log.t[idx]!r} after {prev!r})"
                )
        last_t[tr] = (float(log.t[idx]), line_of_row[idx])


def write_log(log: ExperimentLog, target: str | Path | io.TextIOBase) -> None:
    """Write a log in the documented CSV format."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_log(log, fh)
            return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(LOG_COLUMNS)
    for j in range(log.n_rows):
        writer.writerow([
            f"{log.t[j]:.10g}",
            f"{log.v[j]:.10g}",
            f"{log.i[j]:.10g}",
            log.phase[j],
            int(log.sampling_ms[j]),
            int(log.trial[j]),
            log.polarity[j],
            f"{log.supply_v[j]:.10g}",
        ])


# --- phase segmentation ---------------------------------------------------

@dataclass(frozen=True)
class Segments:
    """Row ranges of one trial: pre = [0, start), fault = [start, stop),
    post = [stop, n). Produced from labels when present, else by threshold."""

    fault_start: int
    fault_stop: int
    n: int
    source: str  # "labels" or "threshold"

    @property
    def pre(self) -> slice:
        return slice(0, self.fault_start)

    @property
    def fault(self) -> slice:
        return slice(self.fault_start, self.fault_stop)

    @property
    def post(self) -> slice:
        return slice(self.fault_stop, self.n)


def segment_phases(log: ExperimentLog, *, baseline_fraction: float = 0.10) -> Segments:
    """Split a single-trial log into pre/fault/post ranges.

    Fully labeled logs are split along their labels. Otherwise the fault
    window is the longest contiguous run where |i| exceeds the midpoint of
    the baseline median |i| (taken over the leading baseline_fraction of
    samples) and the global maximum |i|.
    """
    if log.n_rows == 0:
        raise DomainError("cannot segment an empty log")
    if len(log.trial_ids()) != 1:
        raise DomainError("segment one trial at a time; use trial_view first")

    if all(log.phase):
        fault_rows = [j for j, ph in enumerate(log.phase) if ph == "fault"]
        if not fault_rows:
            raise DomainError("no fault detected: labels contain no fault rows")
        start, stop = fault_rows[0], fault_rows[-1] + 1
        if fault_rows != list(range(start, stop)):
            raise DomainError("fault label rows are not contiguous")
        return Segments(fault_start=start, fault_stop=stop, n=log.n_rows, source="labels")

    abs_i = np.abs(log.i)
    n_base = max(1, int(log.n_rows * baseline_fraction))
    baseline = float(np.median(abs_i[:n_base]))
    peak = float(abs_i.max())
    if peak - baseline <= 1e-12 * max(1.0, peak):
        raise DomainError("no fault detected: current never leaves its baseline")
    threshold = 0.5 * (baseline + peak)

    above = abs_i > threshold
    best_start, best_len = -1, 0
    run_start = None
    for j, flag in enumerate(np.append(above, False)):
        if flag and run_start is None:
            run_start = j
        elif not flag and run_start is not None:
            if j - run_start > best_len:
                best_start, best_len = run_start, j - run_start
            run_start = None
    if best_len == 0:
        raise DomainError("no fault detected: current never crosses the threshold")
    return Segments(fault_start=best_start, fault_stop=best_start + best_len,
                    n=log.n_rows, source="threshold")


# --- decimation -----------------------------------------------------------

def block_average(sig: SampledSignal, block: int) -> SampledSignal:
    """Mean-decimate by a block length; the trailing partial block is dropped."""
    if block < 1:
        raise DomainError(f"block must be >= 1, got {block!r}")
    if block > sig.n:
        raise DomainError(f"block {block} exceeds signal length {sig.n}")
    n_out = sig.n // block
    means = sig.values[: n_out * block].reshape(n_out, block).mean(axis=1)
    return SampledSignal(values=means, t_s=sig.t_s * block)


def _block_means(values: np.ndarray, block: int) -> np.ndarray:
    n_out = values.size // block
    return values[: n_out * block].reshape(n_out, block).mean(axis=1)


# --- exponential-decay fitting -------------------------------------------

@dataclass(frozen=True)
class FitResult:
    r0_fit: float
    k_fit: float
    rmse: float
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "r0_fit_ohm": self.r0_fit,
            "k_fit_per_s": self.k_fit,
            "rmse_ohm": self.rmse,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _decay_model(t: np.ndarray, r0: float, k: float) -> np.ndarray:
    return r0 * np.exp(np.clip(-k * t, -745.0, 709.0))


def fit_exponential_decay(
    t: Sequence[float],
    r: Sequence[float],
    *,
    rel_tol: float = 1e-10,
    max_iter: int = 200,
) -> FitResult:
    """Least-squares fit of r(t) = r0 * exp(-k t).

    A log-linear regression on ln(r) seeds (r0, k); a damped Gauss-Newton
    refinement with step halving polishes the estimate. Convergence means the
    relative parameter change of an accepted step fell below rel_tol.
    A final k <= 0 is reported as non-converged since the decay model demands
    a positive rate.
    """
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    if t.size != r.size or t.size < 3:
        raise DomainError("fit needs at least 3 matching (t, r) points")
    if np.any(r <= 0):
        raise DomainError("fit requires strictly positive resistances")
    if np.any(np.diff(t) <= 0):
        raise DomainError("fit requires strictly increasing times")

    slope, intercept = np.polyfit(t, np.log(r), 1)
    r0 = float(np.exp(intercept))
    k = float(-slope)

    def sse(r0_: float, k_: float) -> float:
        resid = _decay_model(t, r0_, k_) - r
        return float(resid @ resid)

    best = sse(r0, k)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        pred = _decay_model(t, r0, k)
        resid = pred - r
        j0 = pred / r0
        j1 = -t * pred
        jtj = np.array([[j0 @ j0, j0 @ j1], [j0 @ j1, j1 @ j1]])
        jtr = np.array([j0 @ resid, j1 @ resid])
        try:
            step = np.linalg.solve(jtj, -jtr)
        except np.linalg.LinAlgError:
            break
        rel_step = max(
            abs(step[0]) / max(abs(r0), 1e-300),
            abs(step[1]) / max(abs(k), 1e-300),
        )
        lam = 1.0
        accepted = False
        for _ in range(60):
            r0_try = r0 + lam * step[0]
            k_try = k + lam * step[1]
            if r0_try > 0:
                trial_sse = sse(r0_try, k_try)
                if math.isfinite(trial_sse) and trial_sse < best:
                    r0, k, best = r0_try, k_try, trial_sse
                    accepted = True
                    if lam * rel_step < rel_tol:
                        converged = True
                    break
            lam *= 0.5
        if not accepted:
            # refinement stalled; that is convergence only if the proposed
            # step was already negligible, otherwise the solve diverged
            converged = rel_step < rel_tol
            break
        if converged:
            break

    if k <= 0:
        converged = False
    rmse = math.sqrt(best / t.size)
    return FitResult(r0_fit=r0, k_fit=k, rmse=rmse, iterations=iterations,
                     converged=converged)


def resistance_series(
    log: ExperimentLog,
    rows: slice,
    *,
    guard: float = CURRENT_GUARD_A,
) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise r = v / i over a row range, dropping |i| below the guard."""
    v = log.v[rows]
    i = log.i[rows]
    t = log.t[rows]
    keep = np.abs(i) >= guard
    return t[keep], v[keep] / i[keep]


def collapse_window(t: np.ndarray, r: np.ndarray, *, plateau_tol: float = PLATEAU_TOL) -> int:
    """Length of the leading collapse portion of a fault resistance series.

    The window ends at the first sample whose resistance is within
    plateau_tol (relative) of the series minimum; samples from there on
    belong to the floor plateau, which the decay model cannot represent.
    """
    if r.size == 0:
        return 0
    floor = float(r.min())
    cutoff = floor * (1.0 + plateau_tol)
    below = np.nonzero(r <= cutoff)[0]
    return int(below[0]) if below.size else r.size


def fit_fault_resistance(
    log: ExperimentLog,
    segs: Segments,
    *,
    guard: float = CURRENT_GUARD_A,
    plateau_tol: float = PLATEAU_TOL,
    rel_tol: float = 1e-10,
    max_iter: int = 200,
) -> FitResult | None:
    """Fit the decay model to the collapse portion of the fault phase.

    Returns None when the collapse spans fewer than 3 usable samples, which
    happens whenever the sampling interval cannot resolve the transient.
    Times are shifted to fault onset before fitting.
    """
    t, r = resistance_series(log, segs.fault, guard=guard)
    if t.size < 3:
        return None
    n_collapse = collapse_window(t, r, plateau_tol=plateau_tol)
    if n_collapse < 3:
        return None
    t_rel = t[:n_collapse] - t[0]
    return fit_exponential_decay(t_rel, r[:n_collapse], rel_tol=rel_tol, max_iter=max_iter)


# --- sensor / ADC model ---------------------------------------------------

def sensor_transfer(i: float, sensitivity: float, midpoint: float) -> float:
    """Bidirectional current sensor output midpoint + sensitivity * i volts."""
    if sensitivity <= 0:
        raise DomainError(f"sensitivity must be positive, got {sensitivity!r}")
    return midpoint + sensitivity * i


def adc_quantize(v: float, bits: int, fullscale: float) -> float:
    """Quantize to 2^bits steps across [0, fullscale], rounding then clipping."""
    if bits < 1:
        raise DomainError(f"bits must be >= 1, got {bits!r}")
    if fullscale <= 0:
        raise DomainError(f"fullscale must be positive, got {fullscale!r}")
    step = fullscale / (2 ** bits)
    code = math.floor(v / step + 0.5)
    return min(max(code * step, 0.0), fullscale)


# --- simulation -----------------------------------------------------------

@dataclass(frozen=True)
class SimConfig:
    """Everything a synthetic experiment needs, seed included.

    model.v0 is the governed rail voltage (the level the clamp holds before
    the fault), model.r0 the reference resistance, so the pre-fault current
    is v0 / r0. The fault collapses the fault-path resistance at rate k until
    the plateau targets (v_short_min, i_max) are reached.
    """

    model: ModelParams
    clamp: ClampNetwork
    pre_s: float
    fault_s: float
    post_s: float
    v_short_min: float
    i_max: float
    sampling_ms: int = 10
    block_size: int = 1
    noise_std_v: float = 0.0
    noise_std_i: float = 0.0
    sensor_sensitivity: float = 0.1
    sensor_midpoint: float = 2.5
    adc_bits: int = 10
    adc_fullscale: float = 5.0
    quantize: bool = True
    seed: int = 0
    supply_v: float = 2.5
    polarity: str = "forward"
    trial: int = 1
    label_phases: bool = True

    def __post_init__(self) -> None:
        if not (self.pre_s > 0 and self.fault_s > 0 and self.post_s > 0):
            raise DomainError("phase durations must be positive")
        if not (0 < self.v_short_min < self.model.v0):
            raise DomainError(
                f"v_short_min={self.v_short_min!r} must lie in (0, v0={self.model.v0!r})"
            )
        if not self.i_max > self.model.v0 / self.model.r0:
            raise DomainError("i_max target must exceed the pre-fault current v0/r0")
        if self.sampling_ms < 1 or self.block_size < 1:
            raise DomainError("sampling_ms and block_size must be >= 1")
        effective = self.sampling_ms * self.block_size
        if effective not in ALLOWED_SAMPLING_MS:
            raise DomainError(
                f"effective interval {effective} ms (sampling_ms * block_size) "
                f"must be one of {ALLOWED_SAMPLING_MS}"
            )
        if self.noise_std_v < 0 or self.noise_std_i < 0:
            raise DomainError("noise standard deviations must be nonnegative")
        if self.sensor_sensitivity <= 0 or self.sensor_midpoint <= 0:
            raise DomainError("sensor parameters must be positive")
        if self.adc_bits < 1 or self.adc_fullscale <= 0:
            raise DomainError("ADC parameters must be positive")
        if self.polarity not in POLARITIES:
            raise DomainError(f"polarity must be one of {POLARITIES}")


def _phase_samples(duration_s: float, dt: float, name: str) -> int:
    n_exact = duration_s / dt
    n = round(n_exact)
    if n < 1 or abs(n_exact - n) > 1e-9 * max(1.0, abs(n_exact)):
        raise DomainError(
            f"{name} duration {duration_s!r} s is not a positive multiple of "
            f"the base interval {dt!r} s"
        )
    return n


def simulate_experiment(cfg: SimConfig) -> ExperimentLog:
    """Generate a three-phase fault recording through the sensor chain.

    True trajectories follow the governed model: a constant v0/r0 baseline,
    a fault whose resistance collapses as r0 * exp(-k t) until the plateau
    floor v_short_min / i_max engages, and an exponential return to baseline
    at the same rate. The current channel passes through sensor_transfer and
    optional ADC quantization, both channels then receive additive Gaussian
    noise and block averaging. Identical configs produce identical logs.
    """
    dt = cfg.sampling_ms / 1000.0
    n_pre = _phase_samples(cfg.pre_s, dt, "pre")
    n_fault = _phase_samples(cfg.fault_s, dt, "fault")
    n_post = _phase_samples(cfg.post_s, dt, "post")
    for name, n in (("pre", n_pre), ("fault", n_fault), ("post", n_post)):
        if n % cfg.block_size != 0:
            raise DomainError(
                f"{name} phase ({n} samples) is not divisible by block_size "
                f"{cfg.block_size}; blocks would straddle phase boundaries"
            )

    p = cfg.model
    i_pre = p.v0 / p.r0
    r_floor = cfg.v_short_min / cfg.i_max

    v_true = np.empty(n_pre + n_fault + n_post)
    i_true = np.empty_like(v_true)

    v_true[:n_pre] = p.v0
    i_true[:n_pre] = i_pre

    for j in range(n_fault):
        tau = j * dt
        r = max(p.r0 * math.exp(-p.k * tau), r_floor)
        i = min(p.v0 / r, cfg.i_max)
        v_true[n_pre + j] = i * r
        i_true[n_pre + j] = i

    v_last = v_true[n_pre + n_fault - 1]
    i_last = i_true[n_pre + n_fault - 1]
    for j in range(n_post):
        decay = math.exp(-p.k * (j + 1) * dt)
        v_true[n_pre + n_fault + j] = p.v0 + (v_last - p.v0) * decay
        i_true[n_pre + n_fault + j] = i_pre + (i_last - i_pre) * decay

    sign = -1.0 if cfg.polarity == "reverse" else 1.0
    i_signed = sign * i_true

    # measurement chain: sensor, ADC, then noise, then block averaging
    if cfg.quantize:
        v_meas = np.empty_like(v_true)
        i_meas = np.empty_like(i_signed)
        for j in range(i_signed.size):
            vs = sensor_transfer(i_signed[j], cfg.sensor_sensitivity, cfg.sensor_midpoint)
            vs = adc_quantize(vs, cfg.adc_bits, cfg.adc_fullscale)
            i_meas[j] = (vs - cfg.sensor_midpoint) / cfg.sensor_sensitivity
            v_meas[j] = adc_quantize(v_true[j], cfg.adc_bits, cfg.adc_fullscale)
    else:
        # the sensor map is affine and exactly invertible; with no quantizer
        # between transfer and readout the chain cancels, keeping the
        # identity path exact
        v_meas = v_true.copy()
        i_meas = i_signed.copy()

    rng = np.random.default_rng(cfg.seed)
    if cfg.noise_std_v > 0:
        v_meas = v_meas + rng.normal(0.0, cfg.noise_std_v, v_meas.size)
    if cfg.noise_std_i > 0:
        i_meas = i_meas + rng.normal(0.0, cfg.noise_std_i, i_meas.size)

    block = cfg.block_size
    v_out = _block_means(v_meas, block)
    i_out = _block_means(i_meas, block)
    n_out = v_out.size
    dt_out = dt * block
    t_out = np.arange(n_out) * dt_out

    phases: list[str] = []
    if cfg.label_phases:
        b_pre, b_fault = n_pre // block, n_fault // block
        phases = ["pre"] * b_pre + ["fault"] * b_fault + ["post"] * (n_out - b_pre - b_fault)
    else:
        phases = [""] * n_out

    effective_ms = cfg.sampling_ms * block
    return ExperimentLog(
        t=t_out,
        v=v_out,
        i=i_out,
        phase=phases,
        sampling_ms=np.full(n_out, effective_ms, dtype=int),
        trial=np.full(n_out, cfg.trial, dtype=int),
        polarity=[cfg.polarity] * n_out,
        supply_v=np.full(n_out, cfg.supply_v),
    )


def extract_extrema(
    log: ExperimentLog,
    segs: Segments,
    *,
    k: float,
    t_fault: float | None = None,
) -> "FaultExtrema":
    """Measured fault extrema of one segmented trial.

    Baseline levels come from medians over the pre window (robust against
    noise); the fault window contributes its minimum voltage and maximum
    current magnitude. t_fault defaults to the fault-window duration.
    """
    from .bounds import FaultExtrema

    if segs.pre.stop - segs.pre.start < 1:
        raise DomainError("extrema need a nonempty pre-fault baseline")
    if segs.fault.stop - segs.fault.start < 1:
        raise DomainError("extrema need a nonempty fault window")
    v_clamp = float(np.median(log.v[segs.pre]))
    i_nom = float(np.median(np.abs(log.i[segs.pre])))
    v_short_min = float(log.v[segs.fault].min())
    i_max = float(np.abs(log.i[segs.fault]).max())
    v_source = float(np.median(log.supply_v))
    if t_fault is None:
        n_fault = segs.fault.stop - segs.fault.start
        t_fault = n_fault * log.t_s
    return FaultExtrema(
        v_source=v_source,
        v_clamp=v_clamp,
        i_nom=i_nom,
        v_short_min=v_short_min,
        i_max_clap=i_max,
        k_fit=k,
        t_fault=float(t_fault),
    )


def simulate_trials(base: SimConfig, sampling_ms_list: Iterable[int]) -> ExperimentLog:
    """One log with consecutive trials at the given base sampling rates.

    Trial numbering continues from base.trial; each trial derives its own
    seed (base.seed + offset) so streams stay independent yet reproducible.
    """
    logs = []
    for offset, ms in enumerate(sampling_ms_list):
        cfg = replace(base, sampling_ms=ms, trial=base.trial + offset,
                      seed=base.seed + offset)
        logs.append(simulate_experiment(cfg))
    if not logs:
        raise DomainError("at least one sampling rate is required")
    return ExperimentLog(
        t=np.concatenate([lg.t for lg in logs]),
        v=np.concatenate([lg.v for lg in logs]),
        i=np.concatenate([lg.i for lg in logs]),
        phase=[ph for lg in logs for ph in lg.phase],
        sampling_ms=np.concatenate([lg.sampling_ms for lg in logs]),
        trial=np.concatenate([lg.trial for lg in logs]),
        polarity=[pol for lg in logs for pol in lg.polarity],
        supply_v=np.concatenate([lg.supply_v for lg in logs]),
    )
