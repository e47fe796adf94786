"""Static model of the protective diode clamp on the faulted rail.

The clamp is a forward conduction path of series diodes plus a small dynamic
resistance. It bounds the rail at min(v_source, sum(Vf) + i * r_dyn); diode
conduction itself follows the usual exponential junction law. No transient
diode dynamics are modeled, the clamp is a pure transfer function.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import DomainError
from .model import _EXP_ARG_MAX


class ClampParameterWarning(UserWarning):
    """Conduction-path diodes differ; the first diode's junction parameters apply."""


@dataclass(frozen=True)
class DiodeSpec:
    vf: float    # forward drop, volts
    i_s: float   # reverse saturation current, amperes
    n: float     # ideality factor
    v_t: float   # thermal voltage, volts
    c_j: float   # junction capacitance, farads

    def __post_init__(self) -> None:
        if not (self.vf > 0 and self.i_s > 0 and self.n >= 1 and self.v_t > 0 and self.c_j >= 0):
            raise DomainError(
                "DiodeSpec requires vf > 0, i_s > 0, n >= 1, v_t > 0, c_j >= 0, got "
                f"vf={self.vf!r}, i_s={self.i_s!r}, n={self.n!r}, v_t={self.v_t!r}, c_j={self.c_j!r}"
            )


# 1N5408 rectifier at high forward current; i_s, n, v_t are documented defaults
# rather than datasheet values and may be overridden from config.
DIODE_1N5408 = DiodeSpec(vf=1.2, i_s=1e-9, n=1.0, v_t=0.02585, c_j=40e-12)

DIODE_PRESETS = {"1N5408": DIODE_1N5408}


@dataclass(frozen=True)
class ClampNetwork:
    conduction_path: tuple[DiodeSpec, ...]
    r_dyn: float = 0.02          # dynamic fault-path resistance, ohms
    n_clamp_diodes: int = 2      # diode count for capacitive-energy bounds

    def __post_init__(self) -> None:
        if len(self.conduction_path) == 0:
            raise DomainError("conduction_path must contain at least one diode")
        if self.r_dyn < 0:
            raise DomainError(f"r_dyn must be nonnegative, got {self.r_dyn!r}")
        if self.n_clamp_diodes < 1:
            raise DomainError(f"n_clamp_diodes must be >= 1, got {self.n_clamp_diodes!r}")

    @classmethod
    def from_preset(cls, name: str = "1N5408", *, path_len: int = 2,
                    r_dyn: float = 0.02, n_clamp_diodes: int = 2) -> "ClampNetwork":
        if name not in DIODE_PRESETS:
            raise DomainError(f"unknown diode preset {name!r}; known: {sorted(DIODE_PRESETS)}")
        diode = DIODE_PRESETS[name]
        return cls(conduction_path=(diode,) * path_len, r_dyn=r_dyn,
                   n_clamp_diodes=n_clamp_diodes)


def stabilized_voltage(net: ClampNetwork) -> float:
    """Sum of forward drops along the conduction path, the clamp threshold."""
    return sum(d.vf for d in net.conduction_path)


def clamp_output(net: ClampNetwork, v_s: float, i_sc: float) -> float:
    """Clamped rail voltage min(v_s, sum(Vf) + i_sc * r_dyn)."""
    if v_s < 0:
        raise DomainError(f"source voltage must be nonnegative, got {v_s!r}")
    if i_sc < 0:
        raise DomainError(f"short-circuit current must be nonnegative, got {i_sc!r}")
    return min(v_s, stabilized_voltage(net) + i_sc * net.r_dyn)


def network_current(net: ClampNetwork, v_d1: float, v_d3: float) -> float:
    """Total conduction current i_s * (e^(v1/(n vt)) + e^(v3/(n vt)) - 2).

    A single (i_s, n, v_t) triple applies; if the path mixes diode types the
    first diode's parameters are used and a ClampParameterWarning is issued.
    """
    diodes = net.conduction_path
    if any(d != diodes[0] for d in diodes[1:]):
        warnings.warn(
            "conduction path mixes diode parameters; using the first diode's "
            "(i_s, n, v_t) for the exponential law",
            ClampParameterWarning,
            stacklevel=2,
        )
    d = diodes[0]
    total = 0.0
    for v in (v_d1, v_d3):
        arg = v / (d.n * d.v_t)
        if arg > _EXP_ARG_MAX:
            raise DomainError(
                f"diode voltage {v:g} V drives exponent {arg:g} past float range"
            )
        total += math.exp(arg)
    return d.i_s * (total - 2.0)


def dcei(delta_v_cb1: float, delta_v_s: float) -> float:
    """Clamping efficiency 1 - (output spread / source spread); 1 is perfect."""
    if delta_v_s <= 0:
        raise DomainError(f"source spread must be positive, got {delta_v_s!r}")
    return 1.0 - delta_v_cb1 / delta_v_s
