"""Series comparison and time-scale extraction.

Everything here is a pure function over immutable inputs: the comparison
indicator chi, the two crossing extractors (branching time from the spread,
energy time from the kinetic energy), and a log-log power-law fit used by
the scaling sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import ObservableSeries

EXTRACTION_METHODS = ("classical_sim", "quantum_sim", "white_noise")

DEFAULT_EPS_FLOOR = 1e-12


@dataclass(frozen=True)
class ChiResult:
    """Relative-deviation indicator between two series.

    value is sqrt(mean over the compared points of (1 - a_i/b_i)^2).
    Points where |b| falls below the floor are excluded, not regularized;
    n_excluded says how many.
    """

    value: float
    n_compared: int
    n_excluded: int

    def __float__(self) -> float:
        return self.value

    def __post_init__(self):
        if self.value < 0 or not math.isfinite(self.value):
            raise ValueError(f"chi must be finite and >= 0, got {self.value}")
        if self.n_compared < 1:
            raise ValueError("chi needs at least one compared point")


@dataclass(frozen=True)
class TimeScales:
    """Extracted branching / energy times for one run.

    Fields not produced by the extraction that built the record are NaN.
    valid means the relevant crossing was found inside the window.
    """

    t_b: float
    t_e: float
    tau: float
    method: str
    valid: bool

    def __post_init__(self):
        if self.method not in EXTRACTION_METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.valid:
            for name, val in (("t_b", self.t_b), ("t_e", self.t_e)):
                if not math.isnan(val) and val <= 0:
                    raise ValueError(f"{name} must be positive when valid, got {val}")

    @property
    def tb_rescaled(self) -> float:
        return self.t_b / self.tau

    @property
    def te_rescaled(self) -> float:
        return self.t_e / self.tau


def _window_mask(times: np.ndarray, window) -> np.ndarray:
    if window is None:
        return np.ones(times.shape, dtype=bool)
    lo, hi = window
    if not hi > lo:
        raise ValueError(f"empty window ({lo}, {hi}]")
    # half-open on the left: t = lo itself is excluded
    return (times > lo) & (times <= hi)


def chi_indicator(a: ObservableSeries, b: ObservableSeries,
                  window: tuple[float, float] | None = None,
                  eps_floor: float = DEFAULT_EPS_FLOOR) -> ChiResult:
    """sqrt(mean (1 - a(t_i)/b(t_i))^2) over the shared window.

    b is resampled onto a's time grid by linear interpolation when the two
    grids differ; a's points outside b's time range are dropped rather than
    extrapolated. Asymmetric by construction: chi(a, b) != chi(b, a).
    """
    ta = a.times
    if len(b.times) == len(ta) and np.array_equal(b.times, ta):
        vb = b.values
        keep = np.ones(ta.shape, dtype=bool)
    else:
        keep = (ta >= b.times[0]) & (ta <= b.times[-1])
        vb = np.interp(ta[keep], b.times, b.values)
    times = ta[keep]
    va = a.values[keep]

    mask = _window_mask(times, window)
    va, vb = va[mask], vb[mask]

    small = np.abs(vb) < eps_floor
    n_excluded = int(small.sum())
    va, vb = va[~small], vb[~small]
    if va.size == 0:
        raise ValueError("no comparable points after window and floor exclusions")
    value = float(np.sqrt(np.mean((1.0 - va / vb) ** 2)))
    return ChiResult(value=value, n_compared=int(va.size), n_excluded=n_excluded)


def _first_upward_crossing(times: np.ndarray, values: np.ndarray,
                           level: float) -> float | None:
    """Interpolated time of the first upward crossing of level, or None.

    A series that already starts at or above the level has no upward
    crossing under this definition.
    """
    above = values >= level
    if above[0]:
        return None
    idx = np.argmax(above)
    if not above[idx]:
        return None
    t0, t1 = times[idx - 1], times[idx]
    y0, y1 = values[idx - 1], values[idx]
    return float(t0 + (level - y0) * (t1 - t0) / (y1 - y0))


def _meta_float(series: ObservableSeries, key: str, override):
    if override is not None:
        return float(override)
    val = series.metadata.get(key)
    return float(val) if val is not None else math.nan


def _meta_method(series: ObservableSeries) -> str:
    method = series.metadata.get("method", "white_noise")
    return method if method in EXTRACTION_METHODS else "white_noise"


def extract_tb(sigma2: ObservableSeries, tau: float | None = None) -> TimeScales:
    """Branching time: first upward crossing of the spread through 1.

    No crossing in the window is not an error; the record comes back with
    valid=False and t_b = NaN.
    """
    if sigma2.kind != "sigma2":
        raise ValueError(f"expected a sigma2 series, got kind {sigma2.kind!r}")
    t_cross = _first_upward_crossing(sigma2.times, sigma2.values, 1.0)
    return TimeScales(
        t_b=math.nan if t_cross is None else t_cross,
        t_e=math.nan,
        tau=_meta_float(sigma2, "tau", tau),
        method=_meta_method(sigma2),
        valid=t_cross is not None,
    )


def extract_te(ek: ObservableSeries, v0: float,
               tau: float | None = None) -> TimeScales:
    """Energy time: first upward crossing of the kinetic energy through v0.

    A series whose initial value already sits at or above v0 has no
    meaningful energy time; valid=False.
    """
    if ek.kind != "kinetic_energy":
        raise ValueError(f"expected a kinetic_energy series, got kind {ek.kind!r}")
    if v0 <= 0:
        raise ValueError(f"threshold v0 must be positive, got {v0}")
    t_cross = _first_upward_crossing(ek.times, ek.values, v0)
    return TimeScales(
        t_b=math.nan,
        t_e=math.nan if t_cross is None else t_cross,
        tau=_meta_float(ek, "tau", tau),
        method=_meta_method(ek),
        valid=t_cross is not None,
    )


def fit_power_law(points) -> tuple[float, float, float]:
    """Least-squares power law y = prefactor * x**exponent through points.

    points is a sequence of (x, y) pairs, all strictly positive, at least
    three of them. Returns (exponent, prefactor, rms residual in log space).
    """
    pts = list(points)
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points, got {len(pts)}")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    if (x <= 0).any() or (y <= 0).any():
        raise ValueError("power-law fit needs strictly positive coordinates")
    lx, ly = np.log(x), np.log(y)
    exponent, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (exponent * lx + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return float(exponent), float(math.exp(intercept)), rms
