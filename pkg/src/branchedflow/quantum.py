"""Split-step Fourier propagation of the 1D wave function.

Units: hbar = m = 1, so i dpsi/dt = -(1/2) d2psi/dx2 + v0 xi(x, t) psi.
One step applies the potential phase for dt/2, a full spectral kinetic step,
and the potential phase again (Strang splitting); the potential slice is
sampled at the step midpoint, which keeps second order for time-dependent
fields.  Each step is unitary up to round-off and the norm is checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericalInstabilityError
from .potential import (
    CorrelationSpec,
    PotentialRealization,
    SimulationGrid,
    sample_realization,
)
from .series import ObservableSeries

BOUNDARY_AMPLITUDE_LIMIT = 1e-4  # |psi| at the box edge that invalidates sigma2
NORM_DRIFT_LIMIT = 1e-8


@dataclass
class WaveState:
    """Wave function samples on the spatial grid at one time."""

    amplitudes: np.ndarray
    grid: SimulationGrid
    time: float = 0.0
    norm: float = 1.0

    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def init_gaussian(grid: SimulationGrid) -> WaveState:
    """Unit-width packet exp(-(x - L/2)^2 / 2), normalized to 1.

    Demands L >= 20 so the tail at the periodic boundary stays below 1e-8
    and the displacement moment is meaningful from the start.
    """
    if grid.L < 20.0:
        raise DomainError(f"L = {grid.L:.4g} too small for the Gaussian packet "
                          "(need >= 20 for negligible boundary tails)")
    x = grid.x_nodes()
    psi = np.exp(-0.5 * (x - grid.L / 2.0) ** 2).astype(complex)
    psi /= math.sqrt(float(np.sum(np.abs(psi) ** 2) * grid.dx))
    return WaveState(amplitudes=psi, grid=grid)


def init_plane_wave(grid: SimulationGrid) -> WaveState:
    """Uniform zero-momentum state 1/sqrt(L)."""
    psi = np.full(grid.N, 1.0 / math.sqrt(grid.L), dtype=complex)
    return WaveState(amplitudes=psi, grid=grid)


@lru_cache(maxsize=8)
def _kinetic_phase(N: int, L: float, dt: float) -> np.ndarray:
    k = 2.0 * np.pi * np.fft.fftfreq(N, d=L / N)
    return np.exp(-0.5j * k * k * dt)


def _potential_row(potential: PotentialRealization, t: float) -> np.ndarray:
    """Time-interpolated xi(x_j, t) row (clamped at the window edges)."""
    grid = potential.grid
    if t < -1e-9 * grid.T or t > grid.T * (1.0 + 1e-9):
        raise DomainError(f"t = {t:.6g} outside [0, {grid.T:.6g}]")
    s = t / grid.dt
    l0 = int(min(max(math.floor(s), 0), grid.M - 1))
    l1 = min(l0 + 1, grid.M - 1)
    f = min(max(s - l0, 0.0), 1.0)
    if f == 0.0:
        return potential.values[l0]
    return (1.0 - f) * potential.values[l0] + f * potential.values[l1]


def split_step(state: WaveState, potential: PotentialRealization | None,
               spec: CorrelationSpec, dt: float) -> WaveState:
    """Advance by dt in place (and return the state).

    In the free limit (spec.v0 == 0) potential may be None; otherwise it must
    cover [time, time + dt].
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    grid = state.grid
    psi = state.amplitudes
    if spec.v0 != 0.0:
        if potential is None:
            raise ValueError("a potential realization is required when v0 != 0")
        if potential.grid != grid:
            raise ValueError("potential and state live on different grids")
        if state.time + dt > grid.T * (1.0 + 1e-9):
            raise DomainError(f"step to t = {state.time + dt:.6g} leaves the "
                              "potential window")
        xi_mid = _potential_row(potential, state.time + 0.5 * dt)
        half = np.exp(-0.5j * spec.v0 * dt * xi_mid)
        psi = half * psi
        psi = np.fft.ifft(np.fft.fft(psi) * _kinetic_phase(grid.N, grid.L, dt))
        psi *= half
    else:
        psi = np.fft.ifft(np.fft.fft(psi) * _kinetic_phase(grid.N, grid.L, dt))
    state.amplitudes = psi
    state.time += dt
    n = float(np.sum(np.abs(psi) ** 2) * grid.dx)
    if abs(n - 1.0) > NORM_DRIFT_LIMIT:
        raise NumericalInstabilityError(f"norm drifted to {n!r} at t = {state.time:.6g}")
    state.norm = n
    return state


def kinetic_energy(state: WaveState) -> float:
    """Spectral <k^2/2>; the spectral weights make it normalization-free."""
    psi_k = np.fft.fft(state.amplitudes)
    w = np.abs(psi_k) ** 2
    k = 2.0 * np.pi * np.fft.fftfreq(state.grid.N, d=state.grid.dx)
    return float(np.sum(0.5 * k * k * w) / np.sum(w))


def displacement2(state: WaveState, grid: SimulationGrid | None = None) -> float:
    """Second moment of |psi|^2 about the box center L/2."""
    grid = grid or state.grid
    x = grid.x_nodes()
    intensity = state.intensity()
    w = float(np.sum(intensity) * grid.dx)
    return float(np.sum(intensity * (x - grid.L / 2.0) ** 2) * grid.dx / w)


def boundary_amplitude(state: WaveState) -> float:
    """|psi| at the periodic seam (max of the two edge samples)."""
    a = state.amplitudes
    return float(max(abs(a[0]), abs(a[-1])))


def scintillation(intensities: Sequence[np.ndarray]) -> float:
    """S = <I^2>/<I>^2 - 1 with the average over space and ensemble members."""
    stacked = np.concatenate([np.asarray(i, dtype=float) for i in intensities])
    m = float(stacked.mean())
    if m == 0.0:
        raise ValueError("zero mean intensity")
    return float(np.mean(stacked ** 2) / (m * m) - 1.0)


INIT_MODES = ("gaussian", "plane_wave")


def propagate_and_observe(spec: CorrelationSpec, grid: SimulationGrid, seed: int,
                          n_realizations: int, init_mode: str,
                          t_end: float | None = None,
                          indices: Sequence[int] | None = None,
                          ) -> dict[str, ObservableSeries]:
    """Ensemble-averaged quantum observables on the grid's time lattice.

    Returns kinetic_energy plus, per init_mode: sigma2 for "gaussian" (series
    truncated at the first time any member's boundary amplitude exceeds 1e-4),
    scintillation for "plane_wave".  Reductions run in index order, so results
    are bit-reproducible for a fixed (seed, indices).
    """
    grid.require_dynamics_grade()
    if init_mode not in INIT_MODES:
        raise ValueError(f"init_mode must be one of {INIT_MODES}")
    if t_end is None:
        t_end = grid.T
    if t_end > grid.T * (1.0 + 1e-9):
        raise DomainError(f"t_end = {t_end:.6g} exceeds the grid window T = {grid.T:.6g}")
    n_steps = int(round(t_end / grid.dt))
    if n_steps < 1:
        raise ValueError("t_end shorter than one time step")
    if indices is None:
        indices = range(n_realizations)
    elif len(indices) != n_realizations:
        raise ValueError("indices length must equal n_realizations")

    gaussian = init_mode == "gaussian"
    x2 = (grid.x_nodes() - grid.L / 2.0) ** 2
    nt = n_steps + 1
    ek_sum = np.zeros(nt)
    ek_sq = np.zeros(nt)
    s2_sum = np.zeros(nt)
    s2_sq = np.zeros(nt)
    i_sum = np.zeros(nt)    # space-mean intensity
    i2_sum = np.zeros(nt)   # space-mean squared intensity
    s_per = np.zeros((n_realizations, nt))  # per-member scintillation
    first_bad = n_steps + 1  # first index where a boundary tail got noticeable

    for pos, idx in enumerate(indices):
        potential = None
        if spec.v0 != 0.0:
            potential = sample_realization(spec, grid, seed, index=idx)
        state = init_gaussian(grid) if gaussian else init_plane_wave(grid)

        for l in range(nt):
            if l > 0:
                split_step(state, potential, spec, grid.dt)
            intensity = state.intensity()
            ek = kinetic_energy(state)
            ek_sum[l] += ek
            ek_sq[l] += ek * ek
            if gaussian:
                m2 = float(np.sum(intensity * x2) / np.sum(intensity))
                s2_sum[l] += m2
                s2_sq[l] += m2 * m2
                if l < first_bad and math.sqrt(float(max(intensity[0], intensity[-1]))) \
                        > BOUNDARY_AMPLITUDE_LIMIT:
                    first_bad = l
            else:
                mi = float(intensity.mean())
                i_sum[l] += mi
                i2_sum[l] += float(np.mean(intensity ** 2))
                s_per[pos, l] = float(np.mean(intensity ** 2)) / (mi * mi) - 1.0

    r = n_realizations
    times = np.arange(nt) * grid.dt
    meta = {
        "v0": spec.v0, "tau": spec.tau, "vtilde": spec.vtilde,
        "L": grid.L, "T": grid.T, "N": grid.N, "M": grid.M,
        "seed": int(seed), "indices": ",".join(str(i) for i in indices),
        "n_realizations": r, "init_mode": init_mode, "method": "quantum_sim",
    }

    def _series(mean, err, kind, t=times, extra=None):
        md = dict(meta)
        if extra:
            md.update(extra)
        return ObservableSeries(times=t, values=mean, kind=kind, ensemble_count=r,
                                metadata=md, stderr=err)

    def _stats(total, total_sq):
        mean = total / r
        if r > 1:
            err = np.sqrt(np.maximum(total_sq / r - mean ** 2, 0.0) / (r - 1))
        else:
            err = np.zeros_like(mean)
        return mean, err

    out: dict[str, ObservableSeries] = {}
    ek_mean, ek_err = _stats(ek_sum, ek_sq)
    out["kinetic_energy"] = _series(ek_mean, ek_err, "kinetic_energy")

    if gaussian:
        s2_mean, s2_err = _stats(s2_sum, s2_sq)
        cut = max(first_bad, 2)  # a series needs at least two samples
        extra = {}
        if first_bad <= n_steps:
            extra["truncated_at"] = float(times[min(first_bad, n_steps)])
        out["sigma2"] = _series(s2_mean[:cut], s2_err[:cut], "sigma2",
                                t=times[:cut], extra=extra)
    else:
        i_mean = i_sum / r
        i2_mean = i2_sum / r
        s_vals = i2_mean / (i_mean ** 2) - 1.0
        if r > 1:
            s_err = s_per.std(axis=0, ddof=1) / math.sqrt(r)
        else:
            s_err = np.zeros(nt)
        out["scintillation"] = _series(s_vals, s_err, "scintillation")
    return out


def propagate_raster(spec: CorrelationSpec, grid: SimulationGrid, seed: int,
                     index: int = 0, init_mode: str = "plane_wave",
                     t_end: float | None = None, max_rows: int = 2048,
                     max_cols: int = 2048) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """|psi(x, t)| raster for one realization, subsampled to the given caps.

    Returns (raster[row, col], times[row], x[col]); rows are time slices.
    """
    grid.require_dynamics_grade()
    if init_mode not in INIT_MODES:
        raise ValueError(f"init_mode must be one of {INIT_MODES}")
    if t_end is None:
        t_end = grid.T
    n_steps = int(round(t_end / grid.dt))
    stride_t = max(1, -(-(n_steps + 1) // max_rows))
    stride_x = max(1, -(-grid.N // max_cols))

    potential = None
    if spec.v0 != 0.0:
        potential = sample_realization(spec, grid, seed, index=index)
    state = init_gaussian(grid) if init_mode == "gaussian" else init_plane_wave(grid)

    rows = []
    row_times = []
    for l in range(n_steps + 1):
        if l > 0:
            split_step(state, potential, spec, grid.dt)
        if l % stride_t == 0:
            rows.append(np.abs(state.amplitudes[::stride_x]))
            row_times.append(l * grid.dt)
    return np.asarray(rows), np.asarray(row_times), grid.x_nodes()[::stride_x]
