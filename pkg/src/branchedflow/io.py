"""File formats: binary field grids, observable CSVs, table CSVs.

Binary grids ("BFG1"): 60-byte little-endian header
    magic 4s | N u32 | M u32 | dx f64 | dt f64 | tau f64 | v0 f64 |
    seed u64 | index u64
followed by M*N float64 values, time-major (M rows of N). Amplitude
rasters reuse the exact layout under the magic "BFR1"; there the stored
dx/dt are the subsampled spacings.

CSVs carry their provenance as leading '# key = value' lines, so every
output file reconstructs its run from its own header block. Observable
files then have the column row `t,value,stderr`.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .series import OBSERVABLE_KINDS, ObservableSeries

_HEADER = struct.Struct("<4sIIddddQQ")
GRID_MAGIC = b"BFG1"
RASTER_MAGIC = b"BFR1"


@dataclass(frozen=True)
class GridFile:
    """A decoded binary grid: header fields plus the (M, N) value block."""

    magic: bytes
    N: int
    M: int
    dx: float
    dt: float
    tau: float
    v0: float
    seed: int
    index: int
    values: np.ndarray

    @property
    def is_raster(self) -> bool:
        return self.magic == RASTER_MAGIC


def _write_grid(path, magic: bytes, values: np.ndarray, dx: float, dt: float,
                tau: float, v0: float, seed: int, index: int) -> None:
    values = np.ascontiguousarray(values, dtype="<f8")
    if values.ndim != 2:
        raise ValueError(f"grid values must be 2D, got shape {values.shape}")
    rows, cols = values.shape
    header = _HEADER.pack(magic, cols, rows, dx, dt, tau, v0, seed, index)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(values.tobytes())


def write_potential_grid(path, realization, spec) -> None:
    """Dump one sampled field: header from its spec/grid, values time-major."""
    grid = realization.grid
    _write_grid(path, GRID_MAGIC, realization.values, grid.dx, grid.dt,
                spec.tau, spec.v0, realization.seed, realization.index)


def write_raster(path, raster: np.ndarray, dx: float, dt: float, spec,
                 seed: int, index: int) -> None:
    """Dump a subsampled amplitude raster; dx/dt are the coarse spacings."""
    _write_grid(path, RASTER_MAGIC, raster, dx, dt, spec.tau, spec.v0,
                seed, index)


def read_grid(path) -> GridFile:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, n, m, dx, dt, tau, v0, seed, index = _HEADER.unpack(header)
        if magic not in (GRID_MAGIC, RASTER_MAGIC):
            raise ValueError(f"{path}: bad magic {magic!r}")
        data = np.fromfile(fh, dtype="<f8", count=m * n)
    if data.size != m * n:
        raise ValueError(f"{path}: expected {m * n} values, found {data.size}")
    return GridFile(magic=magic, N=n, M=m, dx=dx, dt=dt, tau=tau, v0=v0,
                    seed=seed, index=index, values=data.reshape(m, n))


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_header_value(raw: str):
    low = raw.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def _write_provenance(fh, items) -> None:
    for key, value in items:
        fh.write(f"# {key} = {_format_value(value)}\n")


def _read_provenance(lines) -> dict:
    meta: dict[str, object] = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if not body or "=" not in body:
            continue
        key, raw = (part.strip() for part in body.split("=", 1))
        meta[key] = _parse_header_value(raw)
    return meta


def write_observable_csv(path, series: ObservableSeries,
                         extra_provenance=None) -> None:
    """Series to CSV: '#' provenance block, then t,value,stderr rows."""
    err = series.stderr if series.stderr is not None else np.zeros(len(series.times))
    with open(path, "w", encoding="utf-8") as fh:
        items = [("kind", series.kind), ("ensemble_count", series.ensemble_count)]
        items += sorted(series.metadata.items())
        if extra_provenance:
            items += list(extra_provenance)
        _write_provenance(fh, items)
        fh.write("t,value,stderr\n")
        for t, v, e in zip(series.times, series.values, err):
            fh.write(f"{float(t)!r},{float(v)!r},{float(e)!r}\n")


def read_observable_csv(path) -> ObservableSeries:
    header_lines: list[str] = []
    rows: list[tuple[float, float, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                header_lines.append(line)
                continue
            if line.startswith("t,"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}: expected 3 columns, got {line!r}")
            rows.append((float(parts[0]), float(parts[1]), float(parts[2])))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    meta = _read_provenance(header_lines)
    kind = meta.pop("kind", None)
    if kind not in OBSERVABLE_KINDS:
        raise ValueError(f"{path}: missing or unknown kind {kind!r}")
    count = int(meta.pop("ensemble_count", 1))
    data = np.array(rows, dtype=float)
    return ObservableSeries(times=data[:, 0], values=data[:, 1], kind=kind,
                            ensemble_count=count, metadata=meta,
                            stderr=data[:, 2])


TIMESCALE_COLUMNS = ("tau", "v0", "vtilde", "tb", "te", "method", "valid")


def write_timescales_csv(path, rows, provenance=None) -> None:
    """rows: iterables matching TIMESCALE_COLUMNS."""
    with open(path, "w", encoding="utf-8") as fh:
        if provenance:
            _write_provenance(fh, provenance)
        fh.write(",".join(TIMESCALE_COLUMNS) + "\n")
        for row in rows:
            if len(row) != len(TIMESCALE_COLUMNS):
                raise ValueError(f"time-scale row needs {len(TIMESCALE_COLUMNS)} "
                                 f"fields, got {len(row)}")
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def read_table_csv(path) -> tuple[dict, list[str], list[dict]]:
    """Generic reader for our table CSVs.

    Returns (provenance, column names, rows as per-column dicts with
    header-style value parsing).
    """
    provenance_lines: list[str] = []
    columns: list[str] | None = None
    rows: list[dict] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                provenance_lines.append(line)
                continue
            parts = line.split(",")
            if columns is None:
                columns = parts
                continue
            if len(parts) != len(columns):
                raise ValueError(f"{path}: row width {len(parts)} != "
                                 f"{len(columns)} columns")
            rows.append({c: _parse_header_value(p) for c, p in zip(columns, parts)})
    if columns is None:
        raise ValueError(f"{path}: no column header")
    return _read_provenance(provenance_lines), columns, rows


SWEEP_COLUMNS = (
    "tau", "v0", "vtilde", "wn_bound_ratio",
    "chi_class_vs_wn", "chi_class_vs_quant",
    "tb_class", "tb_class_valid", "tb_quant", "tb_quant_valid",
    "te_class", "te_class_valid", "te_quant", "te_quant_valid",
    "status", "error",
)


def write_sweep_csv(path, rows, provenance=None) -> None:
    """rows: dicts keyed by SWEEP_COLUMNS (error text must not contain commas)."""
    with open(path, "w", encoding="utf-8") as fh:
        if provenance:
            _write_provenance(fh, provenance)
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            missing = [c for c in SWEEP_COLUMNS if c not in row]
            if missing:
                raise ValueError(f"sweep row missing columns: {missing}")
            text = str(row["error"])
            if "," in text or "\n" in text:
                row = dict(row)
                row["error"] = text.replace(",", ";").replace("\n", " ")
            fh.write(",".join(_format_value(row[c]) for c in SWEEP_COLUMNS) + "\n")
