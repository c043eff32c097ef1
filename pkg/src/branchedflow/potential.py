"""Space-time correlated Gaussian random potential on a periodic grid.

The dimensionless field xi(x, t) has zero mean, unit variance and correlation
<xi(x'+x, t'+t) xi(x', t')> = exp(-x^2/2) * exp(-t^2/(2 tau^2)) in units where
the correlation length is 1.  Realizations are synthesized spectrally: mode
amplitudes follow the square root of the target power spectrum and only the
phases are random, so every realization reproduces the domain-averaged
correlation exactly (restricted ensemble).

Convention: arrays are time-major, values[l, j] = xi(x_j, t_l), and the field
is the plain inverse DFT of the coefficient array (no 1/NM factor), which
makes the grid-averaged xi^2 equal to the sum of squared amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainError, GridResolutionError

# Envelope registry: name -> shape of |F[s]|(q) up to a constant factor.
# Constants cancel in the spectral normalization, only the shape matters.
ENVELOPES = {
    "gaussian": lambda q: np.exp(-0.5 * q * q),
}


@dataclass(frozen=True)
class CorrelationSpec:
    """Potential strength and correlation structure in quantum units.

    v0 is the amplitude of the potential v0 * xi(x, t); tau the correlation
    time.  vtilde = v0 * tau^2 is the single classical control parameter.
    """

    v0: float
    tau: float
    envelope: str = "gaussian"
    vtilde: float = field(init=False)

    def __post_init__(self) -> None:
        if self.v0 < 0:
            raise ValueError("v0 must be nonnegative (0 selects the free limit)")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.envelope not in ENVELOPES:
            raise ValueError(f"unknown envelope {self.envelope!r}")
        object.__setattr__(self, "vtilde", self.v0 * self.tau ** 2)


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_pow2(n: int) -> int:
    """Smallest power of two >= n."""
    p = 1
    while p < n:
        p *= 2
    return p


@dataclass(frozen=True)
class SimulationGrid:
    """Periodic sampling grid: N spatial points over L, M time slices over T.

    N and M are powers of two (FFT-friendly by decision).  dt/dx^2 <= 1 and
    dx <= 1/40 are required for propagation-grade grids and are checked by the
    dynamics entry points, not here: synthesis-only grids (e.g. correlation
    studies) may be coarser in time.
    """

    L: float
    T: float
    N: int
    M: int

    def __post_init__(self) -> None:
        if self.L <= 0 or self.T <= 0:
            raise ValueError("domain lengths must be positive")
        if not _is_pow2(self.N) or not _is_pow2(self.M):
            raise ValueError("N and M must be powers of two")

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def dt(self) -> float:
        return self.T / self.M

    def x_nodes(self) -> np.ndarray:
        return np.arange(self.N) * self.dx

    def t_nodes(self) -> np.ndarray:
        return np.arange(self.M) * self.dt

    def k_values(self) -> np.ndarray:
        """Angular wavenumbers in fft order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.N, d=self.dx)

    def omega_values(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.M, d=self.dt)

    def require_dynamics_grade(self) -> None:
        """Resolution demanded of grids that drive particle or wave propagation."""
        if self.dx > 1.0 / 40.0 + 1e-12:
            raise GridResolutionError(
                f"dx = {self.dx:.4g} too coarse for dynamics (need <= 1/40)")
        if self.dt > self.dx ** 2 * (1.0 + 1e-9):
            raise GridResolutionError(
                f"dt/dx^2 = {self.dt / self.dx ** 2:.3g} exceeds 1")


def make_grid(spec: CorrelationSpec, t_end: float, L: float = 100.0,
              N: int = 4096) -> SimulationGrid:
    """Grid covering [0, t_end] at the default propagation ratio dt = dx^2.

    M is the next power of two that keeps both dt <= dx^2 and dt <= tau/6,
    so the temporal correlation stays well resolved even when dx^2 > tau.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    dx = L / N
    rate = max(1.0 / dx ** 2, 6.0 / spec.tau)
    M = next_pow2(max(64, math.ceil(t_end * rate)))
    return SimulationGrid(L=L, T=t_end, N=N, M=M)


def _check_resolution(spec: CorrelationSpec, grid: SimulationGrid) -> None:
    # Coarser than a quarter correlation scale aliases the Gaussian spectrum.
    if grid.dx > 0.25:
        raise GridResolutionError(f"dx = {grid.dx:.4g} > 1/4 correlation length")
    if grid.dt > spec.tau / 4.0:
        raise GridResolutionError(
            f"dt = {grid.dt:.4g} > tau/4 = {spec.tau / 4.0:.4g}")


def build_spectral_amplitudes(spec: CorrelationSpec, grid: SimulationGrid) -> np.ndarray:
    """Deterministic mode amplitudes, shape (M, N) in fft order.

    amplitude(k, w)^2 is proportional to |F[s]|(k) * |F[s]|(w tau) and the
    squared amplitudes sum to 1, fixing the field variance analytically instead
    of rescaling realizations after the fact.
    """
    _check_resolution(spec, grid)
    shape = ENVELOPES[spec.envelope]
    sx = shape(grid.k_values())               # (N,)
    st = shape(grid.omega_values() * spec.tau)  # (M,)
    power = np.outer(st, sx)
    power /= power.sum()
    return np.sqrt(power)


def _half_spectrum_coefficients(spec: CorrelationSpec, grid: SimulationGrid,
                                seed: int, index: int) -> np.ndarray:
    """Random-phase coefficients in rfft layout, shape (M, N//2 + 1).

    Phases are uniform on [0, 2pi) with Hermitian antisymmetry
    phi(-k, -w) = -phi(k, w).  In rfft layout only the columns k = 0 and
    k = k_Nyquist pair with themselves under conjugation and need explicit
    treatment; the interior columns' partners live in the discarded half.
    Self-conjugate modes (DC and Nyquist corners) collapse to phase 0 or pi.
    The DC coefficient is zeroed so every realization has exactly zero mean.
    """
    _check_resolution(spec, grid)
    M, N = grid.M, grid.N
    shape = ENVELOPES[spec.envelope]
    kh = 2.0 * np.pi * np.fft.rfftfreq(N, d=grid.dx)
    st = shape(grid.omega_values() * spec.tau)
    power_half = np.outer(st, shape(kh))
    # Normalizer over the full spectrum: interior columns appear twice.
    weights = np.full(N // 2 + 1, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    total = float((power_half * weights).sum())
    amp = np.sqrt(power_half / total)

    rng = np.random.default_rng(np.random.SeedSequence(entropy=[int(seed), int(index)]))
    phi = rng.uniform(0.0, 2.0 * np.pi, size=(M, N // 2 + 1))
    half = M // 2
    for c in (0, N // 2):
        # pair (m, c) <-> (M - m, c): antisymmetric phase
        phi[half + 1:, c] = -phi[1:half, c][::-1]
        for m in (0, half):
            phi[m, c] = 0.0 if phi[m, c] < np.pi else np.pi

    coeffs = amp * np.exp(1j * phi)
    coeffs[0, 0] = 0.0  # zero mean by construction
    return coeffs


def sample_realization(spec: CorrelationSpec, grid: SimulationGrid,
                       seed: int, index: int = 0) -> "PotentialRealization":
    """Draw one realization; (spec, grid, seed, index) fixes it bit-for-bit."""
    coeffs = _half_spectrum_coefficients(spec, grid, seed, index)
    values = np.fft.irfft2(coeffs, s=(grid.M, grid.N)) * (grid.M * grid.N)
    return PotentialRealization(values=values, grid=grid, seed=int(seed),
                                index=int(index))


@dataclass
class PotentialRealization:
    """One sampled field xi on a grid, time-major values[l, j] = xi(x_j, t_l)."""

    values: np.ndarray
    grid: SimulationGrid
    seed: int = 0
    index: int = 0
    _gradient: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.M, self.grid.N):
            raise ValueError(
                f"values shape {self.values.shape} != (M, N) = "
                f"({self.grid.M}, {self.grid.N})")

    @classmethod
    def from_arrays(cls, values: np.ndarray, grid: SimulationGrid,
                    gradient: np.ndarray | None = None, seed: int = 0,
                    index: int = 0) -> "PotentialRealization":
        """Wrap externally supplied arrays (file loads, synthetic test fields)."""
        real = cls(values=np.asarray(values, dtype=float), grid=grid,
                   seed=seed, index=index)
        if gradient is not None:
            gradient = np.asarray(gradient, dtype=float)
            if gradient.shape != real.values.shape:
                raise ValueError("gradient shape must match values")
            real._gradient = gradient
        return real

    @property
    def gradient(self) -> np.ndarray:
        """d(xi)/dx per time slice, spectral derivative, computed lazily."""
        if self._gradient is None:
            N = self.grid.N
            kh = 2.0 * np.pi * np.fft.rfftfreq(N, d=self.grid.dx)
            spec_rows = np.fft.rfft(self.values, axis=1)
            spec_rows *= 1j * kh
            spec_rows[:, -1] = 0.0  # Nyquist derivative is ambiguous; drop it
            self._gradient = np.fft.irfft(spec_rows, n=N, axis=1)
        return self._gradient

    def sample_mean(self) -> float:
        return float(self.values.mean())

    def sample_variance(self) -> float:
        return float(self.values.var())


def _bilinear(table: np.ndarray, grid: SimulationGrid, x, t):
    """Bilinear lookup on a time-major table: periodic in x, clamped in t."""
    M = grid.M
    tt = float(t)
    if tt < -1e-9 * grid.T or tt > grid.T * (1.0 + 1e-9):
        raise DomainError(f"t = {tt:.6g} outside [0, {grid.T:.6g}]")
    s = tt / grid.dt
    l0 = int(min(max(math.floor(s), 0), M - 1))
    l1 = min(l0 + 1, M - 1)
    ft = min(max(s - l0, 0.0), 1.0)

    xq = np.asarray(x, dtype=float)
    u = xq / grid.dx
    j0 = np.floor(u).astype(np.int64)
    fx = u - j0
    j0 %= grid.N
    j1 = (j0 + 1) % grid.N

    row = table[l0] if ft == 0.0 else (1.0 - ft) * table[l0] + ft * table[l1]
    out = (1.0 - fx) * row[j0] + fx * row[j1]
    return float(out) if np.isscalar(x) else out


def evaluate_xi(realization: PotentialRealization, x, t):
    """xi at arbitrary (x, t): bilinear, x wrapped periodically, t in [0, T]."""
    return _bilinear(realization.values, realization.grid, x, t)


def force_at(realization: PotentialRealization, spec: CorrelationSpec, x, t):
    """Classical force -v0 * d(xi)/dx interpolated like evaluate_xi."""
    g = _bilinear(realization.gradient, realization.grid, x, t)
    return -spec.v0 * g


@dataclass
class EmpiricalCorrelation:
    """Shift-averaged two-point estimate on a lag window."""

    lag_x: np.ndarray
    lag_t: np.ndarray
    values: np.ndarray  # shape (len(lag_t), len(lag_x))


def empirical_correlation(realizations: Sequence[PotentialRealization],
                          max_lag_x: float, max_lag_t: float) -> EmpiricalCorrelation:
    """FFT autocorrelation averaged over space, time and realizations.

    Returns raw second moments (zero lag equals the field variance, which the
    spectral normalization pins at 1 minus the removed DC weight).
    """
    if len(realizations) == 0:
        raise ValueError("need at least one realization")
    grid = realizations[0].grid
    for r in realizations:
        if r.grid != grid:
            raise ValueError("realizations must share one grid")
    if max_lag_x > grid.L / 2 or max_lag_t > grid.T / 2:
        raise ValueError("lags must stay within half the (periodic) domain")

    nx = int(max_lag_x / grid.dx)
    nt = int(max_lag_t / grid.dt)
    acc = np.zeros((grid.M, grid.N))
    for r in realizations:
        spec2 = np.abs(np.fft.rfft2(r.values)) ** 2
        acc += np.fft.irfft2(spec2, s=(grid.M, grid.N))
    acc /= len(realizations) * grid.M * grid.N

    ix = np.concatenate([np.arange(-nx, 0), np.arange(0, nx + 1)])
    it = np.concatenate([np.arange(-nt, 0), np.arange(0, nt + 1)])
    vals = acc[np.ix_(it % grid.M, ix % grid.N)]
    return EmpiricalCorrelation(lag_x=ix * grid.dx, lag_t=it * grid.dt, values=vals)
