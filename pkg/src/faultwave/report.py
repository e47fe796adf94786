"""Report assembly: runs the full analysis over a parsed log and serializes
the outcome as machine-readable documents and plot-ready tables.

A report walks each trial through segmentation, decay fitting, per-segment
fidelity scoring, extrema extraction and bounded-fault characterization, then
aggregates sensor-calibration metrics across trials. Every document embeds a
digest of its input files; the generation timestamp is the only field that
varies between identical runs.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .bounds import characterize_fault
from .calibration import (
    CalibrationReport,
    CalibrationWeights,
    cccs,
    cdi_series,
    nlr,
    redundancy_error,
    rmd,
)
from .errors import DomainError
from .fidelity import SampledSignal, SpectralSummary, ValidationWeights, summarize
from .model import ModelParams, current_modified, current_standard, r_short_deviation
from .pipeline import (
    ExperimentLog,
    Segments,
    extract_extrema,
    fit_fault_resistance,
    segment_phases,
)

_MIN_SEGMENT_SAMPLES = 8


@dataclass
class TrialAnalysis:
    trial_id: int
    log: ExperimentLog
    segments: Segments | None = None
    fit: Any = None
    k_used: float = 0.0
    k_provenance: str = "default"
    spectral: dict[str, SpectralSummary] = field(default_factory=dict)
    extrema: Any = None
    fault_report: Any = None
    cdi_mean_pct: float | None = None
    cdi_excluded: int = 0
    rmd_value: float | None = None


@dataclass
class Analysis:
    """Full analysis state, kept around for plotting after serialization."""

    trials: list[TrialAnalysis]
    calibration: CalibrationReport | None
    warnings: list[str]
    law_curves: dict[str, np.ndarray] | None


def sha256_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _analyze_trial(view: ExperimentLog, trial_id: int, cfg: dict,
                   weights: ValidationWeights, warnings: list[str]) -> TrialAnalysis:
    ta = TrialAnalysis(trial_id=trial_id, log=view)
    try:
        ta.segments = segment_phases(view)
    except DomainError as exc:
        warnings.append(f"trial {trial_id}: segmentation failed: {exc}")
        return ta

    fit_cfg = cfg["fit"]
    ta.fit = fit_fault_resistance(
        view, ta.segments,
        guard=fit_cfg["current_guard_a"],
        plateau_tol=fit_cfg["plateau_tol"],
        rel_tol=fit_cfg["rel_tol"],
        max_iter=int(fit_cfg["max_iter"]),
    )
    if ta.fit is not None and ta.fit.converged and ta.fit.k_fit > 0:
        ta.k_used = ta.fit.k_fit
        ta.k_provenance = "fit"
    else:
        ta.k_used = float(cfg["metrics"]["k_default_per_s"])
        ta.k_provenance = "default"
        if ta.fit is None:
            warnings.append(
                f"trial {trial_id}: collapse transient unresolved at this sampling "
                f"interval; decay constant defaults to {ta.k_used:g} 1/s"
            )
        else:
            warnings.append(
                f"trial {trial_id}: decay fit did not converge to a positive rate; "
                f"decay constant defaults to {ta.k_used:g} 1/s"
            )

    fid = cfg["fidelity"]
    t_s = view.t_s
    for name, rows in (("pre", ta.segments.pre), ("fault", ta.segments.fault),
                       ("post", ta.segments.post)):
        n = rows.stop - rows.start
        if n < _MIN_SEGMENT_SAMPLES:
            warnings.append(
                f"trial {trial_id}: segment {name!r} has {n} samples, "
                f"fewer than {_MIN_SEGMENT_SAMPLES}; fidelity metrics skipped"
            )
            continue
        sig = SampledSignal(values=view.i[rows], t_s=t_s)
        window_len = int(fid["window_len"]) or None
        hop_len = int(fid["hop_len"]) or None
        try:
            ta.spectral[name] = summarize(
                sig, ta.k_used,
                bins=int(fid["bins"]),
                window=fid["window"],
                window_len=window_len,
                hop=hop_len,
                stability_rel_tol=fid["stability_rel_tol"],
                weights=weights,
                include_dc=bool(fid["dominant_include_dc"]),
            )
        except DomainError as exc:
            warnings.append(f"trial {trial_id}: fidelity metrics for {name!r} failed: {exc}")

    try:
        ta.extrema = extract_extrema(view, ta.segments, k=ta.k_used)
        clamp_cfg = cfg["clamp"]
        ta.fault_report = characterize_fault(
            ta.extrema, clamp_cfg["c_j_f"], int(clamp_cfg["n_clamp_diodes"]),
            k_provenance=ta.k_provenance,
        )
        if not ta.fault_report.bounded:
            warnings.append(
                f"trial {trial_id}: measured current exceeds the theoretical "
                f"ceiling; extrema are inconsistent with the governed model"
            )
    except DomainError as exc:
        warnings.append(f"trial {trial_id}: fault characterization skipped: {exc}")

    _trial_calibration(ta, cfg, warnings)
    return ta


def _trial_calibration(ta: TrialAnalysis, cfg: dict, warnings: list[str]) -> None:
    segs = ta.segments
    view = ta.log
    floor = cfg["calibration"]["cdi_floor_a"]
    v_fault = view.v[segs.fault]
    i_fault = np.abs(view.i[segs.fault])
    if v_fault.size < 2:
        warnings.append(f"trial {ta.trial_id}: fault window too short for calibration")
        return
    i_median = float(np.median(i_fault))
    if i_median < floor:
        warnings.append(
            f"trial {ta.trial_id}: fault current median below divisor floor; "
            f"calibration skipped"
        )
        return
    r_sc = float(np.median(v_fault)) / i_median
    if r_sc <= 0:
        warnings.append(f"trial {ta.trial_id}: nonpositive r_sc; calibration skipped")
        return
    values, excluded = cdi_series(i_fault, v_fault / r_sc, floor=floor)
    if values.size:
        ta.cdi_mean_pct = float(values.mean())
        ta.cdi_excluded = excluded
    try:
        ta.rmd_value = abs(rmd(i_fault))
    except DomainError as exc:
        warnings.append(f"trial {ta.trial_id}: drift metric skipped: {exc}")


def _declared_nlr(cfg: dict, warnings: list[str]) -> float:
    """Linearity residual over current-step pairs declared in config.

    Step pairs must be supplied by the operator; no step protocol is inferred
    from the log itself. With none declared the residual is 0 and a warning
    records the omission.
    """
    pairs = cfg["calibration"].get("step_pairs") or []
    values: list[float] = []
    for pair in pairs:
        try:
            delta_measured, delta_ideal = float(pair[0]), float(pair[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise DomainError(f"malformed current-step pair {pair!r}") from exc
        values.append(nlr(delta_measured, delta_ideal))
    if not values:
        warnings.append(
            "no current-step pairs declared; linearity residual defaults to 0"
        )
        return 0.0
    return float(np.mean(values))


def _cross_trial_calibration(
    trials: list[TrialAnalysis],
    scenario: str,
    weights: CalibrationWeights,
    nlr_mean: float,
    warnings: list[str],
) -> CalibrationReport | None:
    scored = [t for t in trials if t.cdi_mean_pct is not None]
    if not scored:
        warnings.append("no trial produced calibration metrics")
        return None

    cdi_mean = float(np.mean([t.cdi_mean_pct for t in scored]))
    rmd_vals = [t.rmd_value for t in scored if t.rmd_value is not None]
    rmd_mean = float(np.mean(rmd_vals)) if rmd_vals else 0.0
    excluded = sum(t.cdi_excluded for t in scored)

    # regime ratio needs at least two distinct supply levels
    by_supply: dict[float, list[float]] = {}
    for t in scored:
        supply = float(np.median(t.log.supply_v))
        by_supply.setdefault(supply, []).append(t.cdi_mean_pct)
    gamma = 1.0
    if len(by_supply) >= 2:
        lo, hi = min(by_supply), max(by_supply)
        nominal = float(np.mean(by_supply[lo]))
        extreme = float(np.mean(by_supply[hi]))
        if nominal > 0:
            gamma = extreme / nominal
        else:
            warnings.append("nominal-regime CDI is zero; regime ratio left at 1")
    else:
        warnings.append("single supply regime; regime ratio defaults to 1")

    redundancy = _cross_rate_redundancy(trials, warnings)

    score = cccs(cdi_mean, rmd_mean, nlr_mean, weights)
    return CalibrationReport(
        cdi_mean_pct=cdi_mean,
        gamma=gamma,
        rmd=rmd_mean,
        nlr=nlr_mean,
        redundancy_error_pct=redundancy,
        cccs=score,
        scenario=scenario,
        excluded_samples=excluded,
    )


def _cross_rate_redundancy(trials: list[TrialAnalysis], warnings: list[str]) -> float:
    # pair the fastest and slowest recordings of the same condition
    groups: dict[tuple[float, str], list[TrialAnalysis]] = {}
    for t in trials:
        key = (float(np.median(t.log.supply_v)), t.log.polarity[0] if t.log.polarity else "")
        groups.setdefault(key, []).append(t)
    for members in groups.values():
        rates = sorted({int(m.log.sampling_ms[0]) for m in members})
        if len(rates) < 2:
            continue
        fast = next(m for m in members if int(m.log.sampling_ms[0]) == rates[0])
        slow = next(m for m in members if int(m.log.sampling_ms[0]) == rates[-1])
        if rates[-1] % rates[0] != 0:
            continue
        try:
            return redundancy_error(
                SampledSignal(np.abs(fast.log.i), rates[0] / 1000.0),
                SampledSignal(np.abs(slow.log.i), rates[-1] / 1000.0),
            )
        except DomainError as exc:
            warnings.append(f"redundancy check failed: {exc}")
    warnings.append("no multi-rate trial pair; redundancy error defaults to 0")
    return 0.0


def _law_curves(trials: list[TrialAnalysis], n_points: int = 200) -> dict[str, np.ndarray] | None:
    """Standard vs converging current over the collapse, indexed by the
    resistance deviation, using the first fully characterized trial."""
    for t in trials:
        if t.fault_report is None or t.extrema is None:
            continue
        p = ModelParams(v0=t.extrema.v_clamp, r0=t.extrema.r0, k=t.k_used)
        t_end = t.fault_report.tau
        ts = np.linspace(0.0, t_end, n_points)
        return {
            "r_short_ohm": np.array([r_short_deviation(p, x) for x in ts]),
            "i_std_a": np.array([current_standard(p, x) for x in ts]),
            "i_mod_a": np.array([current_modified(p, x) for x in ts]),
        }
    return None


def analyze_log(
    log: ExperimentLog,
    cfg: dict,
    *,
    scenario: str | None = None,
    cal_weights: CalibrationWeights | None = None,
    val_weights: ValidationWeights | None = None,
) -> Analysis:
    """Run the complete per-trial and cross-trial analysis."""
    from .config import calibration_weights_from_config, validation_weights_from_config

    warnings: list[str] = []
    if val_weights is None:
        val_weights = validation_weights_from_config(cfg)
    if cal_weights is None:
        scenario, cal_weights = calibration_weights_from_config(cfg, scenario)
    elif scenario is None:
        scenario = "custom"

    trials = [
        _analyze_trial(log.trial_view(tid), tid, cfg, val_weights, warnings)
        for tid in log.trial_ids()
    ]
    nlr_mean = _declared_nlr(cfg, warnings)
    calibration = _cross_trial_calibration(trials, scenario, cal_weights,
                                           nlr_mean, warnings)
    return Analysis(
        trials=trials,
        calibration=calibration,
        warnings=warnings,
        law_curves=_law_curves(trials),
    )


# --- document assembly ----------------------------------------------------

def _segments_doc(ta: TrialAnalysis) -> dict | None:
    if ta.segments is None:
        return None
    s = ta.segments
    t = ta.log.t
    return {
        "source": s.source,
        "fault_start_index": s.fault_start,
        "fault_stop_index": s.fault_stop,
        "fault_start_t_s": float(t[s.fault_start]) if s.fault_start < s.n else None,
        "fault_stop_t_s": float(t[s.fault_stop - 1]) if s.fault_stop > s.fault_start else None,
        "n_rows": s.n,
    }


def _extrema_doc(ta: TrialAnalysis) -> dict | None:
    if ta.extrema is None:
        return None
    e = ta.extrema
    return {
        "v_source_v": e.v_source,
        "v_clamp_v": e.v_clamp,
        "i_nom_a": e.i_nom,
        "v_short_min_v": e.v_short_min,
        "i_max_a": e.i_max_clap,
        "r0_ohm": e.r0,
        "k_per_s": e.k_fit,
        "t_fault_s": e.t_fault,
    }


def build_document(analysis: Analysis, inputs: dict[str, str]) -> dict:
    """Serializable report document; generated_at is the only varying field."""
    doc: dict[str, Any] = {
        "metadata": {
            "tool": "faultwave",
            "version": __version__,
            "generated_at": datetime.now(timezone.utc).isoformat(),
            "inputs": inputs,
        },
        "trials": [],
        "calibration": analysis.calibration.to_dict() if analysis.calibration else None,
        "warnings": list(analysis.warnings),
    }
    for ta in analysis.trials:
        doc["trials"].append({
            "trial": ta.trial_id,
            "polarity": ta.log.polarity[0] if ta.log.polarity else "",
            "supply_v": float(np.median(ta.log.supply_v)),
            "sampling_ms": int(ta.log.sampling_ms[0]),
            "segments": _segments_doc(ta),
            "fit": ta.fit.to_dict() if ta.fit is not None else None,
            "k_used_per_s": ta.k_used,
            "k_provenance": ta.k_provenance,
            "spectral": {name: s.to_dict() for name, s in ta.spectral.items()},
            "extrema": _extrema_doc(ta),
            "fault_report": ta.fault_report.to_dict() if ta.fault_report else None,
        })
    _assert_finite(doc, "report")
    return doc


def _assert_finite(node: Any, path: str) -> None:
    if isinstance(node, dict):
        for key, value in node.items():
            _assert_finite(value, f"{path}.{key}")
    elif isinstance(node, (list, tuple)):
        for idx, value in enumerate(node):
            _assert_finite(value, f"{path}[{idx}]")
    elif isinstance(node, float) and not math.isfinite(node):
        raise DomainError(f"non-finite value at {path}")


def write_json(doc: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def flatten(doc: dict, prefix: str = "") -> list[tuple[str, Any]]:
    rows: list[tuple[str, Any]] = []
    if isinstance(doc, dict):
        for key in sorted(doc):
            rows.extend(flatten(doc[key], f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(doc, (list, tuple)):
        for idx, value in enumerate(doc):
            rows.extend(flatten(value, f"{prefix}[{idx}]"))
    else:
        rows.append((prefix, doc))
    return rows


def write_kv_csv(doc: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in flatten(doc):
            writer.writerow([key, value])


# --- plot-ready tables ----------------------------------------------------

def emit_plot_data(analysis: Analysis, out_dir: str | Path, *,
                   current_guard_a: float = 1e-6) -> list[Path]:
    """Write one CSV per figure family; returns the written paths.

    Files: traces (t_s, v_v, i_a, r_ohm, p_w), spectrum (f_hz, psd),
    spectrogram (frame_t_s, f_hz, power), law_comparison (r_short_ohm,
    i_std_a, i_mod_a). Multi-trial logs suffix trace files with the trial id.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    multi = len(analysis.trials) > 1
    for ta in analysis.trials:
        name = f"traces_trial{ta.trial_id}.csv" if multi else "traces.csv"
        path = out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t_s", "v_v", "i_a", "r_ohm", "p_w"])
            log = ta.log
            for j in range(log.n_rows):
                i = float(log.i[j])
                v = float(log.v[j])
                r = f"{v / i:.10g}" if abs(i) >= current_guard_a else ""
                writer.writerow([f"{log.t[j]:.10g}", f"{v:.10g}", f"{i:.10g}",
                                 r, f"{v * i:.10g}"])
        written.append(path)

    first = next((ta for ta in analysis.trials if "fault" in ta.spectral), None)
    if first is not None:
        summary = first.spectral["fault"]
        path = out_dir / "spectrum.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["f_hz", "psd"])
            for f, p in zip(summary.freqs, summary.psd):
                writer.writerow([f"{f:.10g}", f"{p:.10g}"])
        written.append(path)

        from .fidelity import default_stft_shape, stft_spectrogram

        rows = first.segments.fault
        sig = SampledSignal(first.log.i[rows], first.log.t_s)
        window_len, hop = default_stft_shape(sig.n)
        times, freqs, power = stft_spectrogram(sig, window_len, hop)
        path = out_dir / "spectrogram.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["frame_t_s", "f_hz", "power"])
            for fi, frame_t in enumerate(times):
                for bi, f in enumerate(freqs):
                    writer.writerow([f"{frame_t:.10g}", f"{f:.10g}",
                                     f"{power[fi, bi]:.10g}"])
        written.append(path)

    if analysis.law_curves is not None:
        path = out_dir / "law_comparison.csv"
        curves = analysis.law_curves
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["r_short_ohm", "i_std_a", "i_mod_a"])
            for j in range(curves["r_short_ohm"].size):
                writer.writerow([f"{curves['r_short_ohm'][j]:.10g}",
                                 f"{curves['i_std_a'][j]:.10g}",
                                 f"{curves['i_mod_a'][j]:.10g}"])
        written.append(path)

    return written
