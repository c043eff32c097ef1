"""Classical particle ensembles driven by the fluctuating potential.

Equation of motion: x'' = -v0 * d(xi)/dx, integrated with velocity Verlet
(kick-drift-kick).  Positions wrap around the periodic box for force lookups
only; displacement accounting is unwrapped, otherwise the spreading observable
saturates at (L/2)^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .potential import (
    CorrelationSpec,
    PotentialRealization,
    SimulationGrid,
    force_at,
    sample_realization,
)
from .series import ObservableSeries


@dataclass
class ParticleEnsemble:
    """State of N_p identical particles at a common time."""

    positions: np.ndarray      # wrapped into [0, L)
    velocities: np.ndarray
    displacements: np.ndarray  # unwrapped x(t) - x(0)
    time: float

    @property
    def n_particles(self) -> int:
        return len(self.positions)

    def kinetic_energy(self) -> float:
        """Ensemble mean of v^2 / 2."""
        return float(0.5 * np.mean(self.velocities ** 2))

    def displacement2(self) -> float:
        """Ensemble mean of the squared unwrapped displacement."""
        return float(np.mean(self.displacements ** 2))


def init_ensemble(n_particles: int, grid: SimulationGrid,
                  mode: str = "uniform") -> ParticleEnsemble:
    """Particles at rest on an even lattice x_j = (j + 1/2) L / N_p.

    Deterministic placement removes position-sampling noise from the ensemble
    averages; only the potential realizations carry randomness.
    """
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    if mode != "uniform":
        raise ValueError(f"unknown init mode {mode!r}")
    pos = (np.arange(n_particles) + 0.5) * (grid.L / n_particles)
    return ParticleEnsemble(positions=pos,
                            velocities=np.zeros(n_particles),
                            displacements=np.zeros(n_particles),
                            time=0.0)


def verlet_step(ensemble: ParticleEnsemble, potential: PotentialRealization,
                spec: CorrelationSpec, dt: float) -> ParticleEnsemble:
    """Advance the ensemble by dt in place (and return it).

    Force is evaluated through force_at at t and t + dt, so fractional times
    interpolate between stored potential slices.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    grid = potential.grid
    t = ensemble.time
    if t + dt > grid.T * (1.0 + 1e-9):
        raise DomainError(f"step to t = {t + dt:.6g} leaves the potential window")

    f0 = force_at(potential, spec, ensemble.positions, t)
    v_half = ensemble.velocities + 0.5 * dt * f0
    move = dt * v_half
    ensemble.positions = (ensemble.positions + move) % grid.L
    ensemble.displacements = ensemble.displacements + move
    f1 = force_at(potential, spec, ensemble.positions, t + dt)
    ensemble.velocities = v_half + 0.5 * dt * f1
    ensemble.time = t + dt
    return ensemble


def _row_force(potential: PotentialRealization, spec: CorrelationSpec,
               x: np.ndarray, row: int) -> np.ndarray:
    # force lookup pinned to one stored time slice: the ensemble integrator
    # steps exactly on the grid's dt, so no time interpolation is needed
    g = potential.gradient[row]
    grid = potential.grid
    u = x / grid.dx
    j0 = np.floor(u).astype(np.int64)
    fx = u - j0
    j0 %= grid.N
    j1 = (j0 + 1) % grid.N
    return -spec.v0 * ((1.0 - fx) * g[j0] + fx * g[j1])


def _integrate_single(spec: CorrelationSpec, potential: PotentialRealization,
                      n_particles: int, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """One realization: per-step (ek, sigma2) arrays of length n_steps + 1."""
    grid = potential.grid
    dt = grid.dt
    ens = init_ensemble(n_particles, grid)
    x = ens.positions.copy()          # unwrapped; modular indexing wraps lookups
    v = ens.velocities
    x0 = x.copy()

    ek = np.empty(n_steps + 1)
    s2 = np.empty(n_steps + 1)
    ek[0] = 0.0
    s2[0] = 0.0
    f = _row_force(potential, spec, x, 0)
    for l in range(n_steps):
        v_half = v + 0.5 * dt * f
        x = x + dt * v_half
        f = _row_force(potential, spec, x, min(l + 1, grid.M - 1))
        v = v_half + 0.5 * dt * f
        ek[l + 1] = 0.5 * np.mean(v * v)
        d = x - x0
        s2[l + 1] = np.mean(d * d)
    return ek, s2


def integrate_ensemble(spec: CorrelationSpec, grid: SimulationGrid, seed: int,
                       n_realizations: int, n_particles: int,
                       t_end: float | None = None,
                       indices: Sequence[int] | None = None,
                       ) -> tuple[ObservableSeries, ObservableSeries]:
    """Ensemble-averaged kinetic energy and squared displacement vs time.

    Each realization index draws a fresh potential (deterministic in
    (seed, index)) and a fresh even-lattice ensemble.  Averages accumulate in
    index order so results are bit-reproducible.  t_end defaults to the grid's
    full window and is snapped to a whole number of dt steps.
    """
    grid.require_dynamics_grade()
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

    ek_sum = np.zeros(n_steps + 1)
    ek_sq = np.zeros(n_steps + 1)
    s2_sum = np.zeros(n_steps + 1)
    s2_sq = np.zeros(n_steps + 1)
    for idx in indices:
        potential = sample_realization(spec, grid, seed, index=idx)
        ek, s2 = _integrate_single(spec, potential, n_particles, n_steps)
        ek_sum += ek
        ek_sq += ek * ek
        s2_sum += s2
        s2_sq += s2 * s2

    r = n_realizations
    times = np.arange(n_steps + 1) * grid.dt
    ek_mean = ek_sum / r
    s2_mean = s2_sum / r
    if r > 1:
        # sample std of per-realization means over sqrt(R)
        ek_err = np.sqrt(np.maximum(ek_sq / r - ek_mean ** 2, 0.0) / (r - 1))
        s2_err = np.sqrt(np.maximum(s2_sq / r - s2_mean ** 2, 0.0) / (r - 1))
    else:
        ek_err = np.zeros(n_steps + 1)
        s2_err = np.zeros(n_steps + 1)

    meta = {
        "v0": spec.v0, "tau": spec.tau, "vtilde": spec.vtilde,
        "L": grid.L, "T": grid.T, "N": grid.N, "M": grid.M,
        "seed": int(seed), "indices": ",".join(str(i) for i in indices),
        "n_realizations": n_realizations, "n_particles": n_particles,
        "method": "classical_sim",
    }
    ek_series = ObservableSeries(times=times, values=ek_mean, kind="kinetic_energy",
                                 ensemble_count=r, metadata=dict(meta), stderr=ek_err)
    s2_series = ObservableSeries(times=times, values=s2_mean, kind="sigma2",
                                 ensemble_count=r, metadata=dict(meta), stderr=s2_err)
    return ek_series, s2_series
