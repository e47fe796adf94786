"""Closed-form laws of a governed short-circuit transient.

The fault is modeled as an exponential collapse of the fault-path resistance,

    R(t) = R0 * exp(-k * t),

driven by a constant rail voltage V0. Two current laws follow from it and are
deliberately kept distinct:

* the standard law  I(t) = a * exp(k * t), unbounded as t grows, and
* the converging law I(t) = a * exp(exp(-k * t) - 1), bounded in (a/e, a],

with a = V0/R0 the current at fault onset. Their pointwise gap is the model
divergence. Power, cumulative energy, decay rate, and the stabilization time
are all closed forms of the same parameter bundle.

All operations are pure functions of their arguments and hold for t >= 0;
pre-fault behavior (t < 0) is exposed only through ``transition_state``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

# exp() overflows IEEE doubles just above this exponent
_EXP_ARG_MAX = math.log(sys.float_info.max)


def _exp_checked(x: float, context: str) -> float:
    if x > _EXP_ARG_MAX:
        raise DomainError(f"{context}: exponent {x:g} overflows a 64-bit float")
    return math.exp(x)


@dataclass(frozen=True)
class ModelParams:
    """Parameter bundle (v0, r0, k) shared by every trajectory formula.

    The current scale a = v0/r0 is recomputed on access, never stored, so it
    can not drift out of sync with v0 and r0.
    """

    v0: float  # rail voltage, volts
    r0: float  # pre-fault resistance, ohms
    k: float   # decay constant, 1/s

    def __post_init__(self) -> None:
        if not (self.v0 > 0 and self.r0 > 0 and self.k > 0):
            raise DomainError(
                f"ModelParams requires v0 > 0, r0 > 0, k > 0, "
                f"got v0={self.v0!r}, r0={self.r0!r}, k={self.k!r}"
            )

    @property
    def a(self) -> float:
        """Current at fault onset, amperes."""
        return self.v0 / self.r0


class Regime(Enum):
    PRE_FAULT = "pre_fault"
    FAULT = "fault"


@dataclass(frozen=True)
class TransitionState:
    """Instantaneous (v, i, r) of the system at time t relative to fault onset."""

    t: float
    v: float
    i: float
    r: float
    regime: Regime


def _require_nonneg_t(t: float) -> None:
    if t < 0:
        raise DomainError(
            f"t={t!r} is before fault onset; use transition_state for pre-fault values"
        )


def resistance_at(p: ModelParams, t: float) -> float:
    """R(t) = r0 * exp(-k t), strictly positive and strictly decreasing."""
    _require_nonneg_t(t)
    return p.r0 * math.exp(-p.k * t)


def r_short_deviation(p: ModelParams, t: float) -> float:
    """Deviation of the collapsing resistance from its pre-fault value.

    Returns r0 * (exp(-k t) - 1), which lies in (-r0, 0] and equals
    resistance_at(p, t) - r0.
    """
    _require_nonneg_t(t)
    return p.r0 * math.expm1(-p.k * t)


def transition_rate_from_deviation(r_short: float, r0: float, x: float) -> float:
    """Rate coefficient recovered from a resistance deviation over progression x."""
    if r0 <= 0:
        raise DomainError(f"r0 must be positive, got {r0!r}")
    if x == 0:
        raise DomainError("progression x must be nonzero")
    return r_short / (r0 * x)


def current_standard(p: ModelParams, t: float) -> float:
    """Standard law I(t) = a * exp(k t); unbounded as t grows."""
    _require_nonneg_t(t)
    return p.a * _exp_checked(p.k * t, "current_standard")


def current_modified(p: ModelParams, t: float) -> float:
    """Converging law I(t) = a * exp(exp(-k t) - 1); decreases from a toward a/e."""
    _require_nonneg_t(t)
    return p.a * math.exp(math.expm1(-p.k * t))


def current_derivatives(p: ModelParams, t: float) -> tuple[float, float]:
    """dI/dt for (standard, converging) laws at time t.

    standard:   a k exp(k t)
    converging: -a k exp(-k t) exp(exp(-k t) - 1), vanishing as t grows
    """
    _require_nonneg_t(t)
    d_std = p.a * p.k * _exp_checked(p.k * t, "current_derivatives")
    e = math.exp(-p.k * t)
    d_mod = -p.a * p.k * e * math.exp(e - 1.0)
    return d_std, d_mod


def model_divergence(p: ModelParams, t: float) -> float:
    """Absolute gap |converging - standard| between the two current laws."""
    return abs(current_modified(p, t) - current_standard(p, t))


def instantaneous_power(p: ModelParams, t: float) -> float:
    """P(t) = v0 * a * exp(k t)."""
    _require_nonneg_t(t)
    return p.v0 * p.a * _exp_checked(p.k * t, "instantaneous_power")


def cumulative_energy(p: ModelParams, t: float) -> float:
    """Energy dissipated over [0, t]: (v0 a / k) * (exp(k t) - 1).

    Its derivative in t is instantaneous_power.
    """
    _require_nonneg_t(t)
    if p.k * t > _EXP_ARG_MAX:
        raise DomainError(f"cumulative_energy: exponent {p.k * t:g} overflows")
    return (p.v0 * p.a / p.k) * math.expm1(p.k * t)


def stabilization_time(k: float, eps_tol: float) -> float:
    """Time for the residual fraction to fall to eps_tol: ln(1/eps_tol)/k."""
    if k <= 0:
        raise DomainError(f"k must be positive, got {k!r}")
    if not (0 < eps_tol < 1):
        raise DomainError(f"eps_tol must lie in (0, 1), got {eps_tol!r}")
    return math.log(1.0 / eps_tol) / k


def transition_state(p: ModelParams, t: float) -> TransitionState:
    """System state at any real t; the only operation defined for t < 0."""
    if t < 0:
        return TransitionState(t=t, v=p.v0, i=p.v0 / p.r0, r=p.r0, regime=Regime.PRE_FAULT)
    return TransitionState(
        t=t,
        v=p.v0,
        i=current_standard(p, t),
        r=resistance_at(p, t),
        regime=Regime.FAULT,
    )


def delta_resistance(p: ModelParams, t1: float) -> float:
    """Resistance drop over (0, t1]: r0 * (1 - exp(-k t1)) >= 0."""
    if t1 <= 0:
        raise DomainError(f"t1 must be positive, got {t1!r}")
    return -p.r0 * math.expm1(-p.k * t1)


def delta_current(p: ModelParams, t1: float) -> float:
    """Current rise over (0, t1] under the standard law: a * (exp(k t1) - 1)."""
    if t1 <= 0:
        raise DomainError(f"t1 must be positive, got {t1!r}")
    if p.k * t1 > _EXP_ARG_MAX:
        raise DomainError(f"delta_current: exponent {p.k * t1:g} overflows")
    return p.a * math.expm1(p.k * t1)


def decay_rate(p: ModelParams, t: float) -> float:
    """Relative decay rate -(1/R) dR/dt, identically equal to k."""
    _require_nonneg_t(t)
    return p.k
