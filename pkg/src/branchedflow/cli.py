"""Command-line entry point.

Subcommands: potential, classical, quantum, analytics, extract, sweep,
preset. Point selection is either --preset NAME or --v0/--tau; run settings
come from defaults, an optional --config file, and repeatable --set
key=value overrides, in that precedence order.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import io as bfio
from .analysis import extract_tb, extract_te
from .classical import integrate_ensemble
from .config import resolve_config
from .errors import BranchedFlowError
from .potential import CorrelationSpec, sample_realization
from .presets import ParameterPoint, get_preset, list_presets
from .quantum import propagate_and_observe, propagate_raster
from .runner import SERIES_FILES, grid_for_point, run_sweep
from .whitenoise import (
    SQRT_HALF_PI,
    WN_VALIDITY_VTILDE,
    branching_time,
    branching_time_rescaled,
    energy_time,
    energy_time_rescaled,
)


def _add_common(parser: argparse.ArgumentParser, point: bool = True) -> None:
    parser.add_argument("--config", metavar="FILE", default=None,
                        help="key = value config file")
    parser.add_argument("--set", metavar="KEY=VALUE", action="append",
                        default=[], dest="overrides",
                        help="override one config key (repeatable)")
    parser.add_argument("--paper-scale", action="store_true",
                        help="full-size grid and ensembles")
    parser.add_argument("--seed", type=int, default=None,
                        help="override seed.master")
    if point:
        parser.add_argument("--preset", default=None,
                            help="named parameter point")
        parser.add_argument("--v0", type=float, default=None)
        parser.add_argument("--tau", type=float, default=None)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="branchedflow",
        description="Branching flow of a particle in a fluctuating random "
                    "potential: simulation, analytics, extraction, sweeps.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="synthesize one field realization")
    _add_common(p)
    p.add_argument("--index", type=int, default=0, help="realization index")
    p.add_argument("--out", required=True, help="output binary grid path")

    p = sub.add_parser("classical", help="run the classical ensemble")
    _add_common(p)
    p.add_argument("--outdir", default=".", help="directory for CSV outputs")

    p = sub.add_parser("quantum", help="propagate the wave ensemble")
    _add_common(p)
    p.add_argument("--init", choices=("gaussian", "plane_wave"),
                   default="gaussian")
    p.add_argument("--outdir", default=".", help="directory for CSV outputs")
    p.add_argument("--raster", default=None, metavar="FILE",
                   help="also dump a subsampled |psi| raster (single realization)")

    p = sub.add_parser("analytics", help="tabulate closed-form baselines")
    _add_common(p, point=False)
    p.add_argument("--preset", action="append", default=[], dest="presets",
                   help="named point (repeatable)")
    p.add_argument("--point", action="append", default=[], dest="points",
                   metavar="V0,TAU", help="explicit point (repeatable)")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")

    p = sub.add_parser("extract", help="time scales from observable CSVs")
    _add_common(p, point=False)
    p.add_argument("--sigma2", default=None, metavar="FILE",
                   help="spread series to cross through 1")
    p.add_argument("--ek", default=None, metavar="FILE",
                   help="kinetic-energy series to cross through v0")
    p.add_argument("--v0", type=float, default=None,
                   help="threshold override for --ek")
    p.add_argument("--out", required=True, help="time-scales CSV path")

    p = sub.add_parser("sweep", help="log-spaced (tau, v0) scan")
    _add_common(p, point=False)
    p.add_argument("--tau-min", type=float, required=True)
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--v0-min", type=float, required=True)
    p.add_argument("--v0-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=8, help="cells per axis")
    p.add_argument("--out", required=True, help="sweep CSV path")

    p = sub.add_parser("preset", help="show a named parameter point")
    p.add_argument("name", nargs="?", default=None,
                   help="preset name; omit to list all")
    return top


def _resolve(args) -> "RunConfig":
    overrides = {}
    for item in args.overrides:
        if "=" not in item:
            raise BranchedFlowError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.seed is not None:
        overrides["seed.master"] = args.seed
    return resolve_config(file=args.config, overrides=overrides,
                          paper_scale=args.paper_scale)


def _point_from_args(args) -> ParameterPoint:
    if args.preset is not None:
        if args.v0 is not None or args.tau is not None:
            raise BranchedFlowError("give either --preset or --v0/--tau, not both")
        return get_preset(args.preset)
    if args.v0 is None or args.tau is None:
        raise BranchedFlowError("need --preset or both --v0 and --tau")
    return ParameterPoint(tau=args.tau, v0=args.v0)


def _cmd_potential(args) -> int:
    config = _resolve(args)
    point = _point_from_args(args)
    spec = CorrelationSpec(v0=point.v0, tau=point.tau)
    grid = grid_for_point(point, config)
    real = sample_realization(spec, grid, seed=config.master_seed,
                              index=args.index)
    bfio.write_potential_grid(args.out, real, spec)
    print(f"wrote {args.out}: {grid.M}x{grid.N} field, "
          f"tau={point.tau:.6g} v0={point.v0:.6g} seed={config.master_seed} "
          f"index={args.index}")
    return 0


def _series_provenance(point, grid, config):
    items = [("point.tau", point.tau), ("point.v0", point.v0),
             ("point.vtilde", point.vtilde)]
    if point.label:
        items.append(("point.label", point.label))
    items += [("grid.T_resolved", grid.T), ("grid.M_resolved", grid.M)]
    items += config.provenance_items()
    return items


def _cmd_classical(args) -> int:
    config = _resolve(args)
    point = _point_from_args(args)
    spec = CorrelationSpec(v0=point.v0, tau=point.tau)
    grid = grid_for_point(point, config)
    ek, s2 = integrate_ensemble(
        spec, grid, seed=config.master_seed,
        n_realizations=config.realizations, n_particles=config.particles)
    os.makedirs(args.outdir, exist_ok=True)
    prov = _series_provenance(point, grid, config)
    for series, name in ((ek, "ek_class"), (s2, "s2_class")):
        path = os.path.join(args.outdir, SERIES_FILES[name])
        bfio.write_observable_csv(path, series, extra_provenance=prov)
        print(f"wrote {path}")
    tb = extract_tb(s2)
    if tb.valid:
        print(f"branching time: {tb.t_b:.6g} (t/tau = {tb.tb_rescaled:.6g})")
    else:
        print("branching time: no crossing inside the window")
    return 0


def _cmd_quantum(args) -> int:
    config = _resolve(args)
    point = _point_from_args(args)
    spec = CorrelationSpec(v0=point.v0, tau=point.tau)
    grid = grid_for_point(point, config)
    out = propagate_and_observe(
        spec, grid, seed=config.master_seed,
        n_realizations=config.realizations, init_mode=args.init)
    os.makedirs(args.outdir, exist_ok=True)
    prov = _series_provenance(point, grid, config)
    if args.init == "gaussian":
        names = (("kinetic_energy", "ek_quant_gauss"), ("sigma2", "s2_quant_gauss"))
    else:
        names = (("kinetic_energy", "ek_quant_plane"), ("scintillation", "scint_quant"))
    for key, name in names:
        path = os.path.join(args.outdir, SERIES_FILES[name])
        bfio.write_observable_csv(path, out[key], extra_provenance=prov)
        print(f"wrote {path}")
    if args.raster:
        raster, times, xs = propagate_raster(
            spec, grid, seed=config.master_seed, index=0, init_mode=args.init)
        dt = float(times[1] - times[0]) if len(times) > 1 else grid.dt
        dx = float(xs[1] - xs[0]) if len(xs) > 1 else grid.dx
        bfio.write_raster(args.raster, raster, dx=dx, dt=dt, spec=spec,
                          seed=config.master_seed, index=0)
        print(f"wrote {args.raster}: {raster.shape[0]}x{raster.shape[1]} raster")
    return 0


ANALYTICS_COLUMNS = ("tau", "v0", "vtilde", "ek_slope", "tb", "te",
                     "tb_over_tau", "te_over_tau", "wn_bound_ratio")


def _cmd_analytics(args) -> int:
    points: list[ParameterPoint] = [get_preset(name) for name in args.presets]
    for text in args.points:
        parts = text.split(",")
        if len(parts) != 2:
            raise BranchedFlowError(f"--point expects V0,TAU, got {text!r}")
        points.append(ParameterPoint(tau=float(parts[1]), v0=float(parts[0])))
    if not points:
        raise BranchedFlowError("analytics needs at least one --preset or --point")

    lines = [",".join(ANALYTICS_COLUMNS)]
    for p in points:
        slope = SQRT_HALF_PI * p.v0 ** 2 * p.tau
        row = (p.tau, p.v0, p.vtilde, slope,
               branching_time(p.v0, p.tau), energy_time(p.v0, p.tau),
               branching_time_rescaled(p.vtilde), energy_time_rescaled(p.vtilde),
               p.vtilde / WN_VALIDITY_VTILDE)
        lines.append(",".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_extract(args) -> int:
    if args.sigma2 is None and args.ek is None:
        raise BranchedFlowError("extract needs --sigma2 and/or --ek")
    rows = []

    def meta_point(series):
        tau = float(series.metadata.get("tau", math.nan))
        v0 = float(series.metadata.get("v0", math.nan))
        vt = v0 * tau ** 2 if math.isfinite(v0) and math.isfinite(tau) else math.nan
        return tau, v0, vt

    if args.sigma2:
        series = bfio.read_observable_csv(args.sigma2)
        ts = extract_tb(series)
        tau, v0, vt = meta_point(series)
        rows.append((tau, v0, vt, ts.t_b, ts.t_e, ts.method, ts.valid))
    if args.ek:
        series = bfio.read_observable_csv(args.ek)
        tau, v0, vt = meta_point(series)
        threshold = args.v0 if args.v0 is not None else v0
        if not math.isfinite(threshold):
            raise BranchedFlowError(
                "--ek file carries no v0; pass the threshold via --v0")
        ts = extract_te(series, threshold)
        rows.append((tau, threshold, vt, ts.t_b, ts.t_e, ts.method, ts.valid))

    prov = [("source.sigma2", args.sigma2 or ""), ("source.ek", args.ek or "")]
    bfio.write_timescales_csv(args.out, rows, provenance=prov)
    print(f"wrote {args.out}: {len(rows)} extraction(s)")
    return 0


def _cmd_sweep(args) -> int:
    config = _resolve(args)
    result = run_sweep((args.tau_min, args.tau_max),
                       (args.v0_min, args.v0_max), args.steps, config)
    result.to_csv(args.out)
    failed = [row for row in result.rows if row["status"] != "ok"]
    print(f"wrote {args.out}: {len(result.rows)} cells, {len(failed)} failed")
    for row in failed:
        print(f"  failed tau={row['tau']:.6g} v0={row['v0']:.6g}: {row['error']}",
              file=sys.stderr)
    return 0 if not failed else 1


def _cmd_preset(args) -> int:
    if args.name is None:
        for name in list_presets():
            p = get_preset(name)
            print(f"{name}: tau={p.tau:.6g} v0={p.v0:.6g} vtilde={p.vtilde:.6g}")
        return 0
    p = get_preset(args.name)
    print(f"name = {p.label}")
    print(f"tau = {p.tau!r}")
    print(f"v0 = {p.v0!r}")
    print(f"vtilde = {p.vtilde!r}")
    print(f"tb = {branching_time(p.v0, p.tau)!r}")
    print(f"te = {energy_time(p.v0, p.tau)!r}")
    print(f"tb_over_tau = {branching_time_rescaled(p.vtilde)!r}")
    print(f"te_over_tau = {energy_time_rescaled(p.vtilde)!r}")
    print(f"wn_bound_ratio = {p.vtilde / WN_VALIDITY_VTILDE!r}")
    return 0


_COMMANDS = {
    "potential": _cmd_potential,
    "classical": _cmd_classical,
    "quantum": _cmd_quantum,
    "analytics": _cmd_analytics,
    "extract": _cmd_extract,
    "sweep": _cmd_sweep,
    "preset": _cmd_preset,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (BranchedFlowError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
