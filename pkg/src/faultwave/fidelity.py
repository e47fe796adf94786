"""Signal-fidelity scoring for sampled fault waveforms.

Covers five questions about a recording and rolls them into one index:

* was the sampling rate adequate (Nyquist compliance, NCI),
* how complex is the waveform (quantized-histogram Shannon entropy, the
  transient complexity index TCI),
* where does its spectral energy live (full DFT power spectrum, dominant
  frequency, spectral centroid, spectral entropy and its score SES, and the
  compactness coefficient SCC),
* is the spectrum stable over time (short-time Fourier frames, TFSM), and
* the weighted composite of all of the above (CVI in [0, 1]).

SCC is reported unclamped because measured centroids can sit far above the
model bandwidth k/2pi; it is clamped to [0, 1] only inside the CVI sum so the
composite keeps its bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

DEFAULT_BINS = 256
DEFAULT_WINDOW = "hann"
DEFAULT_WINDOW_FRACTION = 0.10
DEFAULT_HOP_FRACTION = 0.50
DEFAULT_STABILITY_REL_TOL = 0.20

_WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled values with their sampling interval in seconds."""

    values: np.ndarray
    t_s: float

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("signal must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(values)):
            raise DomainError("signal contains non-finite samples")
        if not self.t_s > 0:
            raise DomainError(f"sampling interval must be positive, got {self.t_s!r}")

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def f_s(self) -> float:
        return 1.0 / self.t_s


@dataclass(frozen=True)
class ValidationWeights:
    """Nonnegative weights (w1..w5) for the CVI terms; must sum to 1."""

    w1: float = 0.2
    w2: float = 0.2
    w3: float = 0.2
    w4: float = 0.2
    w5: float = 0.2

    def __post_init__(self) -> None:
        ws = (self.w1, self.w2, self.w3, self.w4, self.w5)
        if any(w < 0 for w in ws):
            raise DomainError(f"weights must be nonnegative, got {ws}")
        if abs(sum(ws) - 1.0) > _WEIGHT_SUM_TOL:
            raise DomainError(f"weights must sum to 1, got {sum(ws)!r}")


@dataclass(frozen=True)
class SpectralSummary:
    """Per-segment fidelity metrics plus the spectrum they came from."""

    nci: float
    tci: float           # normalized histogram entropy in [0, 1]
    f_d_hz: float
    f_c_hz: float
    h_s_bits: float
    scc: float           # unclamped; may exceed 1 on measured data
    ses: float
    tfsm: float
    cvi: float
    freqs: np.ndarray = field(repr=False)
    psd: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "nci": self.nci,
            "tci": self.tci,
            "f_d_hz": self.f_d_hz,
            "f_c_hz": self.f_c_hz,
            "h_s_bits": self.h_s_bits,
            "scc": self.scc,
            "ses": self.ses,
            "tfsm": self.tfsm,
            "cvi": self.cvi,
        }


def f_max_from_k(k: float) -> float:
    """Effective model bandwidth k / 2pi in hertz."""
    if k <= 0:
        raise DomainError(f"k must be positive, got {k!r}")
    return k / (2.0 * math.pi)


def nyquist_nci(f_s: float, f_max: float) -> float:
    """Sampling margin f_s / (2 f_max); values >= 1 mean compliant."""
    if f_s <= 0 or f_max <= 0:
        raise DomainError(f"f_s and f_max must be positive, got {f_s!r}, {f_max!r}")
    return f_s / (2.0 * f_max)


def quantized_histogram(sig: SampledSignal, m: int = DEFAULT_BINS) -> np.ndarray:
    """Probabilities over m equal-width bins spanning [min, max] of the signal.

    The top bin edge is closed so the maximum sample lands in the last bin.
    A constant signal puts unit mass in a single bin.
    """
    if m < 2:
        raise DomainError(f"bin count must be >= 2, got {m!r}")
    values = sig.values
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        p = np.zeros(m)
        p[0] = 1.0
        return p
    counts, _ = np.histogram(values, bins=m, range=(lo, hi))
    return counts / values.size


def shannon_entropy(p: np.ndarray) -> float:
    """Entropy -sum(p log2 p) in bits, with 0 log 0 taken as 0."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise DomainError("probabilities must be nonnegative")
    total = float(p.sum())
    if abs(total - 1.0) > _WEIGHT_SUM_TOL:
        raise DomainError(f"probabilities must sum to 1, got {total!r}")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def transient_complexity(h: float, m: int) -> float:
    """Normalized entropy h / log2(m) in [0, 1]."""
    if m < 2:
        raise DomainError(f"bin count must be >= 2, got {m!r}")
    h_max = math.log2(m)
    if not (-1e-12 <= h <= h_max + 1e-9):
        raise DomainError(f"entropy {h!r} outside [0, log2 {m}]")
    return min(max(h / h_max, 0.0), 1.0)


def dft_psd(sig: SampledSignal) -> tuple[np.ndarray, np.ndarray]:
    """Full-length power spectrum |DFT|^2 with bin frequencies k / (N t_s).

    Parseval holds under this convention: sum|x|^2 == sum(psd)/N.
    """
    x = sig.values
    if x.size < 2:
        raise DomainError("spectrum needs at least 2 samples")
    spectrum = np.fft.fft(x)
    psd = np.abs(spectrum) ** 2
    freqs = np.arange(x.size) / (x.size * sig.t_s)
    return freqs, psd


def dominant_frequency(freqs: np.ndarray, psd: np.ndarray, *, include_dc: bool = True) -> float:
    """Frequency of the maximal PSD bin; ties resolve to the lowest frequency."""
    freqs = np.asarray(freqs, dtype=float)
    psd = np.asarray(psd, dtype=float)
    if freqs.size == 0 or freqs.size != psd.size:
        raise DomainError("frequency and PSD vectors must be nonempty and equal length")
    start = 0 if include_dc else 1
    if start >= psd.size:
        raise DomainError("spectrum too short to exclude DC")
    return float(freqs[start + int(np.argmax(psd[start:]))])


def spectral_centroid(freqs: np.ndarray, psd: np.ndarray) -> float:
    """Power-weighted mean frequency sum(f * psd) / sum(psd)."""
    freqs = np.asarray(freqs, dtype=float)
    psd = np.asarray(psd, dtype=float)
    total = float(psd.sum())
    if total <= 0:
        raise DomainError("spectral centroid undefined for an all-zero spectrum")
    return float((freqs * psd).sum() / total)


def spectral_entropy(psd: np.ndarray) -> float:
    """Entropy in bits of the PSD normalized to a probability distribution."""
    psd = np.asarray(psd, dtype=float)
    total = float(psd.sum())
    if total <= 0:
        raise DomainError("spectral entropy undefined for an all-zero spectrum")
    return shannon_entropy(psd / total)


def ses(h_s: float, n_bins: int) -> float:
    """Spectral entropy score h_s / log2(n_bins) in [0, 1]."""
    if n_bins < 2:
        raise DomainError(f"n_bins must be >= 2, got {n_bins!r}")
    return min(max(h_s / math.log2(n_bins), 0.0), 1.0)


def scc(f_c: float, f_max: float) -> float:
    """Centroid over model bandwidth, f_c / f_max, deliberately unclamped."""
    if f_max <= 0:
        raise DomainError(f"f_max must be positive, got {f_max!r}")
    return f_c / f_max


def _window(kind: str, length: int) -> np.ndarray:
    if kind == "hann":
        # periodic Hann, suited to spectral frames
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(length) / length)
    if kind == "rect":
        return np.ones(length)
    raise DomainError(f"unknown window kind {kind!r}; use 'hann' or 'rect'")


def stft_spectrogram(
    sig: SampledSignal,
    window_len: int,
    hop: int,
    *,
    window: str = DEFAULT_WINDOW,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Short-time power spectrum per frame.

    Returns (frame_times, freqs, power) where power has shape
    (frames, window_len) and frames = 1 + floor((N - window_len) / hop).
    Frame times mark frame centers.
    """
    n = sig.n
    if not 2 <= window_len <= n:
        raise DomainError(f"window_len must lie in [2, {n}], got {window_len!r}")
    if not 1 <= hop <= window_len:
        raise DomainError(f"hop must lie in [1, window_len], got {hop!r}")
    w = _window(window, window_len)
    frames = 1 + (n - window_len) // hop
    power = np.empty((frames, window_len))
    times = np.empty(frames)
    for j in range(frames):
        start = j * hop
        seg = sig.values[start:start + window_len] * w
        power[j] = np.abs(np.fft.fft(seg)) ** 2
        times[j] = (start + window_len / 2.0) * sig.t_s
    freqs = np.arange(window_len) / (window_len * sig.t_s)
    return times, freqs, power


def tfsm(power: np.ndarray, freqs: np.ndarray, *, rel_tol: float = DEFAULT_STABILITY_REL_TOL) -> float:
    """Fraction of frames whose centroid stays near the median frame centroid.

    A frame is stable when its spectral centroid lies within rel_tol (relative)
    of the median centroid across all frames; zero-power frames carry a zero
    centroid. Returns stable / total in [0, 1].
    """
    power = np.asarray(power, dtype=float)
    if power.ndim != 2 or power.shape[0] < 1:
        raise DomainError("spectrogram must have at least one frame")
    if rel_tol < 0:
        raise DomainError(f"rel_tol must be nonnegative, got {rel_tol!r}")
    totals = power.sum(axis=1)
    centroids = np.zeros(power.shape[0])
    nz = totals > 0
    centroids[nz] = (power[nz] * freqs).sum(axis=1) / totals[nz]
    med = float(np.median(centroids))
    if med == 0.0:
        stable = centroids == 0.0
    else:
        stable = np.abs(centroids - med) <= rel_tol * abs(med)
    return float(stable.sum() / centroids.size)


def cvi(
    nci: float,
    tci: float,
    scc_value: float,
    ses_value: float,
    tfsm_value: float,
    w: ValidationWeights | None = None,
) -> float:
    """Composite validation index in [0, 1].

    NCI saturates at 1 and SCC clamps into [0, 1] before weighting, so the
    composite rewards compliance, complexity, compactness and stability:
    w1 min(1, nci) + w2 tci + w3 (1 - clamp(scc)) + w4 (1 - ses) + w5 tfsm.
    """
    w = w or ValidationWeights()
    for name, v in (("nci", nci), ("tci", tci), ("scc", scc_value),
                    ("ses", ses_value), ("tfsm", tfsm_value)):
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")
    nci_star = min(1.0, nci)
    scc_dag = min(max(scc_value, 0.0), 1.0)
    return (w.w1 * nci_star + w.w2 * tci + w.w3 * (1.0 - scc_dag)
            + w.w4 * (1.0 - ses_value) + w.w5 * tfsm_value)


def default_stft_shape(n: int, *, window_fraction: float = DEFAULT_WINDOW_FRACTION,
                       hop_fraction: float = DEFAULT_HOP_FRACTION) -> tuple[int, int]:
    """Default frame geometry: window 10% of N (at least 2), hop half a window."""
    window_len = max(2, min(n, int(round(n * window_fraction))))
    hop = max(1, int(round(window_len * hop_fraction)))
    return window_len, hop


def summarize(
    sig: SampledSignal,
    k: float,
    *,
    bins: int = DEFAULT_BINS,
    window: str = DEFAULT_WINDOW,
    window_len: int | None = None,
    hop: int | None = None,
    stability_rel_tol: float = DEFAULT_STABILITY_REL_TOL,
    weights: ValidationWeights | None = None,
    include_dc: bool = True,
) -> SpectralSummary:
    """Compute every fidelity metric of a segment against model bandwidth k/2pi."""
    f_max = f_max_from_k(k)
    nci = nyquist_nci(sig.f_s, f_max)
    hist = quantized_histogram(sig, bins)
    tci = transient_complexity(shannon_entropy(hist), bins)
    freqs, psd = dft_psd(sig)
    f_d = dominant_frequency(freqs, psd, include_dc=include_dc)
    f_c = spectral_centroid(freqs, psd)
    h_s = spectral_entropy(psd)
    ses_value = ses(h_s, len(psd))
    scc_value = scc(f_c, f_max)
    if window_len is None or hop is None:
        auto_window, auto_hop = default_stft_shape(sig.n)
        window_len = auto_window if window_len is None else window_len
        hop = auto_hop if hop is None else hop
    _, stft_freqs, power = stft_spectrogram(sig, window_len, hop, window=window)
    tfsm_value = tfsm(power, stft_freqs, rel_tol=stability_rel_tol)
    cvi_value = cvi(nci, tci, scc_value, ses_value, tfsm_value, weights)
    return SpectralSummary(
        nci=nci,
        tci=tci,
        f_d_hz=f_d,
        f_c_hz=f_c,
        h_s_bits=h_s,
        scc=scc_value,
        ses=ses_value,
        tfsm=tfsm_value,
        cvi=cvi_value,
        freqs=freqs,
        psd=psd,
    )
