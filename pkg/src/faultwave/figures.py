"""Matplotlib rendering of the report's figure families.

Each renderer mirrors one of the plot-data CSVs so the PNGs and the tables
always describe the same numbers. Rendering runs on the Agg backend and
never opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .report import Analysis

_DPI = 120


def render_figures(analysis: Analysis, out_dir: str | Path) -> list[Path]:
    """Render every available figure; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    multi = len(analysis.trials) > 1
    for ta in analysis.trials:
        name = f"traces_trial{ta.trial_id}.png" if multi else "traces.png"
        written.append(_render_traces(ta, out_dir / name))

    first = next((ta for ta in analysis.trials if "fault" in ta.spectral), None)
    if first is not None:
        written.append(_render_spectrum(first, out_dir / "spectrum.png"))
        written.append(_render_spectrogram(first, out_dir / "spectrogram.png"))

    if analysis.law_curves is not None:
        written.append(_render_law_comparison(analysis.law_curves,
                                              out_dir / "law_comparison.png"))
    return written


def _render_traces(ta, path: Path) -> Path:
    log = ta.log
    i = np.asarray(log.i)
    v = np.asarray(log.v)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(np.abs(i) >= 1e-6, v / i, np.nan)
    p = v * i

    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    panels = [
        (axes[0, 0], v, "voltage [V]"),
        (axes[0, 1], i, "current [A]"),
        (axes[1, 0], r, "resistance [ohm]"),
        (axes[1, 1], p, "power [W]"),
    ]
    for ax, series, label in panels:
        ax.plot(log.t, series, lw=0.8)
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
    axes[1, 0].set_yscale("log")
    for ax in axes[1]:
        ax.set_xlabel("t [s]")
    if ta.segments is not None:
        for ax, *_ in panels:
            ax.axvspan(log.t[ta.segments.fault_start],
                       log.t[ta.segments.fault_stop - 1],
                       color="tab:red", alpha=0.08)
    fig.suptitle(f"trial {ta.trial_id} waveforms")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _render_spectrum(ta, path: Path) -> Path:
    summary = ta.spectral["fault"]
    half = summary.freqs.size // 2 + 1
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.semilogy(summary.freqs[:half], np.maximum(summary.psd[:half], 1e-300), lw=0.9)
    ax.set_xlabel("frequency [Hz]")
    ax.set_ylabel("power")
    ax.set_title(f"fault-phase power spectrum (trial {ta.trial_id})")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _render_spectrogram(ta, path: Path) -> Path:
    from .fidelity import SampledSignal, default_stft_shape, stft_spectrogram

    rows = ta.segments.fault
    sig = SampledSignal(ta.log.i[rows], ta.log.t_s)
    window_len, hop = default_stft_shape(sig.n)
    times, freqs, power = stft_spectrogram(sig, window_len, hop)
    half = freqs.size // 2 + 1

    fig, ax = plt.subplots(figsize=(8, 5))
    db = 10.0 * np.log10(np.maximum(power[:, :half].T, 1e-300))
    mesh = ax.pcolormesh(times, freqs[:half], db, shading="nearest", cmap="magma")
    fig.colorbar(mesh, ax=ax, label="power [dB]")
    ax.set_xlabel("frame center [s]")
    ax.set_ylabel("frequency [Hz]")
    ax.set_title(f"fault-phase spectrogram (trial {ta.trial_id})")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _render_law_comparison(curves: dict, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(curves["r_short_ohm"], curves["i_std_a"], "r--", lw=1.2,
            label="standard law")
    ax.plot(curves["r_short_ohm"], curves["i_mod_a"], "b-", lw=1.2,
            label="converging law")
    ax.set_xlabel("resistance deviation [ohm]")
    ax.set_ylabel("current [A]")
    ax.set_yscale("log")
    ax.set_title("current laws over the collapse")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
