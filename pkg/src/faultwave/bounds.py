"""Bounded-fault characterization from measured extrema.

A governed fault never reaches zero resistance: the clamp holds the rail at
v_clamp and the collapse bottoms out at a resistance floor r_c_min. From the
four measured extrema (clamped voltage, nominal current, minimum fault
voltage, maximum fault current) plus the decay constant, this module derives
the floor fraction epsilon, the theoretical current ceiling, sustained and
nominal power, the sustained fault efficiency (SFE), the clamping-speed index,
the stabilization time, and the ratio of fault energy to the largest possible
junction-capacitance energy (SCER).

SFE comes from the numeric chain p_css / p_nom of measured values, not from a
closed form in the reference resistance; the chain is the authoritative
definition for this toolkit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .model import _EXP_ARG_MAX, ModelParams, cumulative_energy


@dataclass(frozen=True)
class FaultExtrema:
    """Measured extrema of one governed fault experiment.

    r0 here is the governed reference resistance v_clamp / i_nom, a property
    of the clamped operating point, distinct from the physical load resistance.
    """

    v_source: float      # supply feeding the clamp, volts
    v_clamp: float       # clamped rail voltage, volts
    i_nom: float         # nominal pre-fault current, amperes
    v_short_min: float   # minimum rail voltage during fault, volts
    i_max_clap: float    # maximum clamped fault current, amperes
    k_fit: float         # decay constant, 1/s
    t_fault: float       # fault duration, seconds

    def __post_init__(self) -> None:
        fields = {
            "v_source": self.v_source, "v_clamp": self.v_clamp, "i_nom": self.i_nom,
            "v_short_min": self.v_short_min, "i_max_clap": self.i_max_clap,
            "k_fit": self.k_fit, "t_fault": self.t_fault,
        }
        bad = {name: v for name, v in fields.items() if not v > 0}
        if bad:
            raise DomainError(f"fault extrema must be strictly positive, got {bad}")
        if not self.v_short_min < self.v_clamp:
            raise DomainError(
                f"v_short_min={self.v_short_min!r} must sit below v_clamp={self.v_clamp!r}"
            )
        if not self.i_max_clap > self.i_nom:
            raise DomainError(
                f"i_max_clap={self.i_max_clap!r} must exceed i_nom={self.i_nom!r}"
            )

    @property
    def r0(self) -> float:
        """Governed reference resistance v_clamp / i_nom, ohms."""
        return self.v_clamp / self.i_nom


@dataclass(frozen=True)
class BoundedFaultReport:
    r_c_min: float
    epsilon: float
    i_ceiling: float
    p_css: float
    p_nom: float
    sfe: float
    tci_clamp: float
    tau: float
    scer: float
    e_total: float
    e_cap: float
    k_provenance: str
    bounded: bool

    def to_dict(self) -> dict:
        return {
            "r_c_min_ohm": self.r_c_min,
            "epsilon": self.epsilon,
            "i_ceiling_a": self.i_ceiling,
            "p_css_w": self.p_css,
            "p_nom_w": self.p_nom,
            "sfe": self.sfe,
            "tci_clamp": self.tci_clamp,
            "tau_s": self.tau,
            "scer": self.scer,
            "e_total_j": self.e_total,
            "e_cap_j": self.e_cap,
            "k_provenance": self.k_provenance,
            "bounded": self.bounded,
        }


def _require_positive(**kwargs: float) -> None:
    bad = {name: v for name, v in kwargs.items() if not v > 0}
    if bad:
        raise DomainError(f"arguments must be strictly positive, got {bad}")


def resistance_floor(v_short_min: float, i_max: float) -> float:
    """Smallest resistance reached during the fault, v_short_min / i_max."""
    _require_positive(v_short_min=v_short_min, i_max=i_max)
    return v_short_min / i_max


def epsilon_fraction(r_c_min: float, r0: float) -> float:
    """Resistance floor as a fraction of the reference resistance."""
    _require_positive(r_c_min=r_c_min, r0=r0)
    if not r_c_min < r0:
        raise DomainError(f"floor {r_c_min!r} must lie below the reference {r0!r}")
    return r_c_min / r0


def current_ceiling(v_clamp: float, r0: float, eps: float) -> float:
    """Theoretical maximum fault current v_clamp / (r0 * eps)."""
    _require_positive(v_clamp=v_clamp, r0=r0, eps=eps)
    return v_clamp / (r0 * eps)


def css_power(v_short_min: float, i_max: float) -> float:
    """Clamped short sustained power v_short_min * i_max."""
    _require_positive(v_short_min=v_short_min, i_max=i_max)
    return v_short_min * i_max


def nominal_power(v_clamp: float, r0: float) -> float:
    """Nominal operating power v_clamp^2 / r0."""
    _require_positive(v_clamp=v_clamp, r0=r0)
    return v_clamp * v_clamp / r0


def sfe(p_css: float, p_nom: float) -> float:
    """Sustained fault efficiency p_css / p_nom; above 1 the fault outpowers
    normal operation."""
    _require_positive(p_css=p_css, p_nom=p_nom)
    return p_css / p_nom


def tci_clamp(k: float, eps: float) -> float:
    """Clamping-speed index k / ln(1/eps); high values mean fast stabilization."""
    _require_positive(k=k)
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    return k / math.log(1.0 / eps)


def stabilization_tau(k: float, eps: float) -> float:
    """Time to reach the resistance floor, ln(1/eps)/k; tau * k == ln(1/eps)."""
    _require_positive(k=k)
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    return math.log(1.0 / eps) / k


def scer(
    p_css: float,
    t_fault: float,
    c_j: float,
    v_clamp: float,
    n_diodes: int,
) -> tuple[float, float, float]:
    """Sustained-to-capacitive energy ratio with its two energies.

    e_total = p_css * t_fault is the dissipated fault energy; e_cap is the
    largest energy n_diodes junction capacitances could hold at v_clamp.
    Returns (scer, e_total, e_cap); a ratio far above 1 rules out capacitive
    discharge as the power source.
    """
    _require_positive(p_css=p_css, t_fault=t_fault, c_j=c_j, v_clamp=v_clamp,
                      n_diodes=float(n_diodes))
    e_total = p_css * t_fault
    e_cap = 0.5 * c_j * v_clamp * v_clamp * n_diodes
    return e_total / e_cap, e_total, e_cap


def overshoot_ratio(k: float, t: float) -> float:
    """Transient overshoot factor exp(k t) of the standard current law."""
    _require_positive(k=k)
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    if k * t > _EXP_ARG_MAX:
        raise DomainError(f"overshoot_ratio: exponent {k * t:g} overflows")
    return math.exp(k * t)


def energy_growth(p: ModelParams, t: float, tau: float) -> float:
    """Energy at t relative to energy at the stabilization time tau."""
    if tau <= 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    denom = cumulative_energy(p, tau)
    if denom == 0:
        raise DomainError("reference energy at tau is zero")
    return cumulative_energy(p, t) / denom


def characterize_fault(
    e: FaultExtrema,
    c_j: float,
    n_diodes: int,
    *,
    k_provenance: str = "fit",
) -> BoundedFaultReport:
    """Full metric chain from measured extrema to a bounded-fault report.

    The boundedness check i_ceiling >= i_max_clap is flagged in the report
    rather than fatal; a violation means the extrema are inconsistent with
    the governed model, which is worth reporting, not hiding.
    """
    r_c_min = resistance_floor(e.v_short_min, e.i_max_clap)
    eps = epsilon_fraction(r_c_min, e.r0)
    i_ceiling = current_ceiling(e.v_clamp, e.r0, eps)
    p_css = css_power(e.v_short_min, e.i_max_clap)
    p_nom = nominal_power(e.v_clamp, e.r0)
    sfe_value = sfe(p_css, p_nom)
    tci = tci_clamp(e.k_fit, eps)
    tau = stabilization_tau(e.k_fit, eps)
    scer_value, e_total, e_cap = scer(p_css, e.t_fault, c_j, e.v_clamp, n_diodes)
    return BoundedFaultReport(
        r_c_min=r_c_min,
        epsilon=eps,
        i_ceiling=i_ceiling,
        p_css=p_css,
        p_nom=p_nom,
        sfe=sfe_value,
        tci_clamp=tci,
        tau=tau,
        scer=scer_value,
        e_total=e_total,
        e_cap=e_cap,
        k_provenance=k_provenance,
        bounded=i_ceiling >= e.i_max_clap,
    )
