"""Named parameter points.

Two ladders cover the regimes of interest: the b-series holds v0 = 50
(semiclassical) and the q-series v0 = 0.2 (deep quantum), both stepping the
classical strength vtilde = v0 * tau^2 through decades, tau = sqrt(vtilde/v0).
Two more points sit at the coordinates of well-known experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError

_VTILDE_TOL = 1e-9


@dataclass(frozen=True)
class ParameterPoint:
    tau: float
    v0: float
    vtilde: float = field(default=math.nan)
    label: str | None = None

    def __post_init__(self):
        if self.tau <= 0 or self.v0 < 0:
            raise ValueError(f"need tau > 0 and v0 >= 0, got tau={self.tau}, v0={self.v0}")
        derived = self.v0 * self.tau ** 2
        if math.isnan(self.vtilde):
            object.__setattr__(self, "vtilde", derived)
        elif abs(self.vtilde - derived) > _VTILDE_TOL * max(1.0, abs(derived)):
            raise ValueError(
                f"inconsistent vtilde {self.vtilde} != v0*tau^2 = {derived}")

    @classmethod
    def from_strength(cls, v0: float, vtilde: float,
                      label: str | None = None) -> "ParameterPoint":
        """Point on a constant-v0 ladder at classical strength vtilde."""
        if v0 <= 0 or vtilde <= 0:
            raise ValueError("from_strength needs positive v0 and vtilde")
        return cls(tau=math.sqrt(vtilde / v0), v0=v0, label=label)


def _ladder(prefix: str, v0: float, count: int) -> dict[str, ParameterPoint]:
    return {
        f"{prefix}{n}": ParameterPoint.from_strength(
            v0, 10.0 ** (n - 3), label=f"{prefix}{n}")
        for n in range(count)
    }


PRESETS: dict[str, ParameterPoint] = {
    **_ladder("b", 50.0, 6),
    **_ladder("q", 0.2, 5),
    # rounded-tau variant of b2; kept for cross-checks
    "b2_rounded": ParameterPoint(tau=0.05, v0=50.0, label="b2_rounded"),
    # experimental anchor points, vtilde ~ 0.04 and ~ 0.05
    "topinka": ParameterPoint(tau=0.22, v0=0.83, label="topinka"),
    "patsyk": ParameterPoint(tau=3.36e-4, v0=4.42e5, label="patsyk"),
}

B_SERIES = tuple(f"b{n}" for n in range(6))
Q_SERIES = tuple(f"q{n}" for n in range(5))


def get_preset(name: str) -> ParameterPoint:
    key = name.strip().lower()
    try:
        return PRESETS[key]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError(f"unknown preset {name!r}; known: {known}") from None


def list_presets() -> tuple[str, ...]:
    return tuple(sorted(PRESETS))
