"""Orchestration: one parameter point end to end, and (tau, v0) sweeps.

A point run couples the classical ensemble, the two quantum initial states
and the analytic baseline on one shared grid, extracts the time scales, and
scores the indicator values the sweep table wants. Sweeps derive one seed
per cell from the master seed and the cell coordinates, so results never
depend on execution order or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import ChiResult, TimeScales, chi_indicator, extract_tb, extract_te
from .classical import integrate_ensemble
from .config import RunConfig
from .errors import BranchedFlowError
from .io import SWEEP_COLUMNS, write_observable_csv, write_sweep_csv, write_timescales_csv
from .potential import CorrelationSpec, SimulationGrid, make_grid
from .presets import ParameterPoint
from .quantum import propagate_and_observe
from .series import ObservableSeries
from .whitenoise import WN_VALIDITY_VTILDE, branching_time, wn_kinetic_energy

SERIES_FILES = {
    "ek_class": "ek_class.csv",
    "s2_class": "s2_class.csv",
    "ek_quant_plane": "ek_quant_plane.csv",
    "scint_quant": "scint_quant.csv",
    "ek_quant_gauss": "ek_quant_gauss.csv",
    "s2_quant_gauss": "s2_quant_gauss.csv",
}


@dataclass
class PointResult:
    point: ParameterPoint
    config: RunConfig
    grid: SimulationGrid
    series: dict[str, ObservableSeries] = field(default_factory=dict)
    scales: dict[str, TimeScales] = field(default_factory=dict)
    chi_class_vs_wn: ChiResult | None = None
    chi_class_vs_quant: ChiResult | None = None

    @property
    def window(self) -> tuple[float, float]:
        """Comparison window (0, 5 t_b^wn]."""
        tb = branching_time(self.point.v0, self.point.tau)
        return (0.0, 5.0 * tb)


def grid_for_point(point: ParameterPoint, config: RunConfig) -> SimulationGrid:
    """Resolve the grid: explicit T/M from config, or the auto rules."""
    spec = CorrelationSpec(v0=point.v0, tau=point.tau)
    t_end = config.T
    if t_end <= 0:
        tb = branching_time(point.v0, point.tau)
        if not math.isfinite(tb):
            raise BranchedFlowError(
                "cannot auto-size the time window at v0 = 0; set grid.T")
        t_end = 5.0 * tb
    if config.M > 0:
        return SimulationGrid(L=config.L, T=t_end, N=config.N, M=config.M)
    return make_grid(spec, t_end, L=config.L, N=config.N)


def _stream_seed(master: int, tag: int, share: bool) -> int:
    if share or tag == 0:
        return master
    state = np.random.SeedSequence(entropy=[master, tag]).generate_state(1, np.uint64)
    return int(state[0] % (2 ** 63))


def white_noise_series(times, v0: float, tau: float,
                       ek0: float = 0.0) -> ObservableSeries:
    """Analytic linear-growth kinetic energy on an explicit time grid."""
    times = np.asarray(times, dtype=float)
    values = wn_kinetic_energy(times, v0, tau, ek0=ek0)
    return ObservableSeries(
        times=times, values=np.asarray(values, dtype=float),
        kind="kinetic_energy", ensemble_count=1,
        metadata={"v0": v0, "tau": tau, "ek0": ek0, "method": "white_noise"})


def run_point(point: ParameterPoint, config: RunConfig,
              outdir=None) -> PointResult:
    """Classical + quantum + analytics for one parameter point.

    Numerical failures propagate; sweep cells catch them and label the
    cell failed. With outdir set, every series lands in its own CSV and
    the extracted scales in timescales.csv.
    """
    spec = CorrelationSpec(v0=point.v0, tau=point.tau)
    grid = grid_for_point(point, config)
    result = PointResult(point=point, config=config, grid=grid)

    seed_c = _stream_seed(config.master_seed, 0, config.share_seeds)
    seed_p = _stream_seed(config.master_seed, 1, config.share_seeds)
    seed_g = _stream_seed(config.master_seed, 2, config.share_seeds)

    ek_c, s2_c = integrate_ensemble(
        spec, grid, seed=seed_c, n_realizations=config.realizations,
        n_particles=config.particles)
    result.series["ek_class"] = ek_c
    result.series["s2_class"] = s2_c

    plane = propagate_and_observe(
        spec, grid, seed=seed_p, n_realizations=config.realizations,
        init_mode="plane_wave")
    result.series["ek_quant_plane"] = plane["kinetic_energy"]
    result.series["scint_quant"] = plane["scintillation"]

    gauss = propagate_and_observe(
        spec, grid, seed=seed_g, n_realizations=config.realizations,
        init_mode="gaussian")
    result.series["ek_quant_gauss"] = gauss["kinetic_energy"]
    result.series["s2_quant_gauss"] = gauss["sigma2"]

    result.scales["tb_class"] = extract_tb(s2_c)
    result.scales["te_class"] = extract_te(ek_c, point.v0)
    result.scales["tb_quant"] = extract_tb(result.series["s2_quant_gauss"])
    result.scales["te_quant"] = extract_te(result.series["ek_quant_plane"], point.v0)

    window = result.window
    wn = white_noise_series(ek_c.times, point.v0, point.tau)
    result.chi_class_vs_wn = chi_indicator(ek_c, wn, window=window)
    result.chi_class_vs_quant = chi_indicator(
        ek_c, result.series["ek_quant_plane"], window=window)

    if outdir is not None:
        _write_point_outputs(result, outdir)
    return result


def _point_provenance(result: PointResult) -> list[tuple[str, object]]:
    point, grid = result.point, result.grid
    items = [("point.tau", point.tau), ("point.v0", point.v0),
             ("point.vtilde", point.vtilde)]
    if point.label:
        items.append(("point.label", point.label))
    items += [("grid.T_resolved", grid.T), ("grid.M_resolved", grid.M)]
    items += result.config.provenance_items()
    return items


def _write_point_outputs(result: PointResult, outdir) -> None:
    import os

    prov = _point_provenance(result)
    for name, filename in SERIES_FILES.items():
        write_observable_csv(os.path.join(outdir, filename),
                             result.series[name], extra_provenance=prov)
    point = result.point
    rows = []
    for key in ("tb_class", "te_class", "tb_quant", "te_quant"):
        ts = result.scales[key]
        rows.append((point.tau, point.v0, point.vtilde,
                     ts.t_b, ts.t_e, ts.method, ts.valid))
    write_timescales_csv(os.path.join(outdir, "timescales.csv"), rows,
                         provenance=prov)


@dataclass
class SweepResult:
    points: list[ParameterPoint]
    rows: list[dict]
    provenance: list[tuple[str, object]]

    @property
    def all_ok(self) -> bool:
        return all(row["status"] == "ok" for row in self.rows)

    def to_csv(self, path) -> None:
        write_sweep_csv(path, self.rows, provenance=self.provenance)


def _cell_seed(master: int, i_tau: int, i_v0: int) -> int:
    state = np.random.SeedSequence(
        entropy=[master, i_tau, i_v0]).generate_state(1, np.uint64)
    return int(state[0] % (2 ** 63))


def _nan_row(point: ParameterPoint) -> dict:
    row = {c: math.nan for c in SWEEP_COLUMNS}
    row.update(tau=point.tau, v0=point.v0, vtilde=point.vtilde,
               wn_bound_ratio=point.vtilde / WN_VALIDITY_VTILDE,
               tb_class_valid=False, tb_quant_valid=False,
               te_class_valid=False, te_quant_valid=False,
               status="failed", error="")
    return row


def _run_cell(point: ParameterPoint, config: RunConfig) -> dict:
    row = _nan_row(point)
    try:
        result = run_point(point, config)
    except (BranchedFlowError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row["chi_class_vs_wn"] = float(result.chi_class_vs_wn)
    row["chi_class_vs_quant"] = float(result.chi_class_vs_quant)
    for prefix in ("tb", "te"):
        for flavor in ("class", "quant"):
            ts = result.scales[f"{prefix}_{flavor}"]
            value = ts.t_b if prefix == "tb" else ts.t_e
            row[f"{prefix}_{flavor}"] = value
            row[f"{prefix}_{flavor}_valid"] = ts.valid
    row["status"] = "ok"
    return row


def run_sweep(tau_range: tuple[float, float], v0_range: tuple[float, float],
              steps, config: RunConfig) -> SweepResult:
    """Log-spaced (tau, v0) scan; cells fail independently.

    steps is one int for both axes or a (n_tau, n_v0) pair. Rows come back
    ordered by (tau, v0) regardless of worker count.
    """
    n_tau, n_v0 = (steps, steps) if isinstance(steps, int) else steps
    if n_tau < 1 or n_v0 < 1:
        raise ValueError("steps must be >= 1 on both axes")
    for lo, hi in (tau_range, v0_range):
        if lo <= 0 or hi < lo:
            raise ValueError("ranges must be positive with hi >= lo")

    taus = np.logspace(math.log10(tau_range[0]), math.log10(tau_range[1]), n_tau)
    v0s = np.logspace(math.log10(v0_range[0]), math.log10(v0_range[1]), n_v0)
    cells = []
    for i, tau in enumerate(taus):
        for j, v0 in enumerate(v0s):
            point = ParameterPoint(tau=float(tau), v0=float(v0))
            cfg = RunConfig(
                **{**{f: getattr(config, f) for f in (
                    "L", "N", "M", "T", "realizations", "particles",
                    "share_seeds", "workers", "paper_scale")},
                   "master_seed": _cell_seed(config.master_seed, i, j)})
            cells.append((point, cfg))

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(lambda c: _run_cell(*c), cells))
    else:
        rows = [_run_cell(point, cfg) for point, cfg in cells]

    provenance = [("sweep.tau_min", tau_range[0]), ("sweep.tau_max", tau_range[1]),
                  ("sweep.v0_min", v0_range[0]), ("sweep.v0_max", v0_range[1]),
                  ("sweep.steps_tau", n_tau), ("sweep.steps_v0", n_v0)]
    provenance += config.provenance_items()
    return SweepResult(points=[c[0] for c in cells], rows=rows,
                       provenance=provenance)
