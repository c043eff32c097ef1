/**
 * The four figure kinds: observable curves, log-log scaling tables,
 * parameter-space heat maps and wave-amplitude rasters.
 *
 * Rendering is strictly read-only: data columns are drawn as stored, the
 * only transforms are the axis mappings and display normalization of the
 * raster gray levels.  Analytic overlays are computed from provenance
 * parameters, never fitted to the data.
 */

import * as path from "node:path";

import { drawFrame, drawLegend, fmtNumber, logScale, makeScales, plotRect, type PlotRect } from "./axes.js";
import { BLACK, Canvas, FONT_H, GRAY, PALETTE, WHITE, type RGB } from "./canvas.js";
import { readCsv, readSeries, type SeriesData } from "./csv.js";
import { gridValue, readGrid } from "./grid.js";
import { OVERLAY_LABELS, overlayValue, WN_VALIDITY_VTILDE, type OverlayKind } from "./overlays.js";

export const FIGURE_W = 860;
export const FIGURE_H = 600;

// Parameter points of the two experiments marked on the phase diagram.
const EXPERIMENT_MARKERS: { tau: number; v0: number; label: string }[] = [
  { tau: 0.22, v0: 0.83, label: "topinka" },
  { tau: 3.36e-4, v0: 4.42e5, label: "patsyk" },
];

function finiteRange(values: Iterable<number>): { min: number; max: number } {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min > max) throw new Error("no finite values to plot");
  return { min, max };
}

function stem(p: string): string {
  return path.basename(p).replace(/\.[^.]*$/, "");
}

// ---------------------------------------------------------------------------
// curves

export function renderCurves(inputs: string[], overlays: OverlayKind[]): Canvas {
  if (inputs.length === 0) throw new Error("curves figure needs at least one input series");
  const series: SeriesData[] = inputs.map(readSeries);

  const canvas = new Canvas(FIGURE_W, FIGURE_H);
  const rect = plotRect(canvas);

  const first = series[0];
  const v0 = first.table.metaNumber("v0");
  const tau = first.table.metaNumber("tau");
  if (overlays.length > 0 && (v0 === undefined || tau === undefined)) {
    throw new Error(
      `${first.table.path}: overlay requested but header lacks v0/tau parameters`,
    );
  }
  const y0 = first.value.find((v) => Number.isFinite(v)) ?? 0;

  const overlayCurves = overlays.map((kind) => ({
    kind,
    values: first.t.map((t) => overlayValue(kind, t, { v0: v0!, tau: tau!, y0 })),
  }));

  const tRange = finiteRange(series.flatMap((s) => s.t));
  const vAll: number[] = [];
  for (const s of series) {
    for (let i = 0; i < s.value.length; i++) {
      vAll.push(s.value[i] - s.stderr[i], s.value[i] + s.stderr[i]);
    }
  }
  for (const o of overlayCurves) vAll.push(...o.values);
  const vRange = finiteRange(vAll);
  const pad = (vRange.max - vRange.min) * 0.05 || 1;

  const { x, y } = makeScales(rect, tRange.min, tRange.max,
                              vRange.min - pad, vRange.max + pad, false, false);

  const legend: { label: string; color: RGB; dashed?: boolean }[] = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const tint: RGB = [
      Math.round((color[0] + 2 * 255) / 3),
      Math.round((color[1] + 2 * 255) / 3),
      Math.round((color[2] + 2 * 255) / 3),
    ];
    const px = s.t.map((t) => x.toPx(t));
    if (s.stderr.some((e) => e > 0)) {
      canvas.polyline(px, s.value.map((v, j) => y.toPx(v - s.stderr[j])), tint);
      canvas.polyline(px, s.value.map((v, j) => y.toPx(v + s.stderr[j])), tint);
    }
    canvas.polyline(px, s.value.map((v) => y.toPx(v)), color);
    legend.push({ label: stem(inputs[i]), color });
  });

  overlayCurves.forEach((o, i) => {
    const color: RGB = i === 0 ? BLACK : GRAY;
    canvas.polyline(first.t.map((t) => x.toPx(t)),
                    o.values.map((v) => y.toPx(v)), color, [5, 4]);
    legend.push({ label: OVERLAY_LABELS[o.kind], color, dashed: true });
  });

  const kindName = (first.table.meta["kind"] ?? "value").replace(/_/g, " ");
  drawFrame(canvas, rect, x, y, { title: kindName, xLabel: "t", yLabel: kindName });
  drawLegend(canvas, rect, legend);
  return canvas;
}

// ---------------------------------------------------------------------------
// loglog

export function renderLoglog(input: string, xCol: string, yCols: string[],
                             slopes: number[]): Canvas {
  const table = readCsv(input);
  const xsAll = table.numbers(xCol);
  const columns = yCols.map((name) => ({ name, values: table.numbers(name) }));

  const canvas = new Canvas(FIGURE_W, FIGURE_H);
  const rect = plotRect(canvas);

  const pts = columns.map((c) => {
    const xs: number[] = [];
    const ys: number[] = [];
    for (let i = 0; i < xsAll.length; i++) {
      // Log axes can only place strictly positive finite points.
      if (xsAll[i] > 0 && Number.isFinite(xsAll[i]) &&
          c.values[i] > 0 && Number.isFinite(c.values[i])) {
        xs.push(xsAll[i]);
        ys.push(c.values[i]);
      }
    }
    return { name: c.name, xs, ys };
  });
  if (pts.every((p) => p.xs.length === 0)) {
    throw new Error(`${input}: no positive finite points for log-log axes`);
  }

  const xr = finiteRange(pts.flatMap((p) => p.xs));
  const yr = finiteRange(pts.flatMap((p) => p.ys));
  const x = logScale(xr.min / 1.3, xr.max * 1.3, rect.x0, rect.x1);
  const y = logScale(yr.min / 1.6, yr.max * 1.6, rect.y1, rect.y0);

  const legend: { label: string; color: RGB; dashed?: boolean }[] = [];
  pts.forEach((p, i) => {
    const color = PALETTE[i % PALETTE.length];
    const px = p.xs.map((v) => x.toPx(v));
    const py = p.ys.map((v) => y.toPx(v));
    canvas.polyline(px, py, color);
    for (let j = 0; j < px.length; j++) canvas.square(px[j], py[j], 5, color);
    legend.push({ label: p.name, color });
  });

  // Dashed power-law guides, anchored to the geometric middle of the data.
  const xg = Math.sqrt(xr.min * xr.max);
  slopes.forEach((slope, i) => {
    const ref = pts[i % pts.length];
    if (ref.ys.length === 0) return;
    const yg = Math.exp(ref.ys.reduce((a, v) => a + Math.log(v), 0) / ref.ys.length);
    const gx: number[] = [];
    const gy: number[] = [];
    for (let k = 0; k <= 64; k++) {
      const v = x.min * (x.max / x.min) ** (k / 64);
      const w = yg * (v / xg) ** slope;
      if (w < y.min || w > y.max) continue;
      gx.push(x.toPx(v));
      gy.push(y.toPx(w));
    }
    canvas.polyline(gx, gy, GRAY, [5, 4]);
    if (gx.length > 1) {
      canvas.text(gx[gx.length - 1] - 68, gy[gy.length - 1] - FONT_H,
                  `slope ${fmtNumber(slope)}`, GRAY);
    }
  });

  drawFrame(canvas, rect, x, y, { xLabel: xCol, yLabel: yCols.join(", ") });
  drawLegend(canvas, rect, legend);
  return canvas;
}

// ---------------------------------------------------------------------------
// heatmap

const VIRIDIS: RGB[] = [
  [68, 1, 84], [71, 44, 122], [59, 81, 139], [44, 113, 142], [33, 144, 141],
  [39, 173, 129], [92, 200, 99], [170, 220, 50], [253, 231, 37],
];

function colormap(u: number): RGB {
  const s = Math.min(1, Math.max(0, u)) * (VIRIDIS.length - 1);
  const i = Math.min(VIRIDIS.length - 2, Math.floor(s));
  const f = s - i;
  return [
    Math.round(VIRIDIS[i][0] + f * (VIRIDIS[i + 1][0] - VIRIDIS[i][0])),
    Math.round(VIRIDIS[i][1] + f * (VIRIDIS[i + 1][1] - VIRIDIS[i][1])),
    Math.round(VIRIDIS[i][2] + f * (VIRIDIS[i + 1][2] - VIRIDIS[i][2])),
  ];
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

/** Cell edges at geometric midpoints; end cells mirror their half width. */
function logEdges(centers: number[]): number[] {
  if (centers.length === 1) {
    return [centers[0] / 1.2, centers[0] * 1.2];
  }
  const edges: number[] = [];
  edges.push(centers[0] * Math.sqrt(centers[0] / centers[1]));
  for (let i = 0; i + 1 < centers.length; i++) {
    edges.push(Math.sqrt(centers[i] * centers[i + 1]));
  }
  const n = centers.length;
  edges.push(centers[n - 1] * Math.sqrt(centers[n - 1] / centers[n - 2]));
  return edges;
}

export function renderHeatmap(input: string, valueCol: string): Canvas {
  const table = readCsv(input);
  const taus = table.numbers("tau");
  const v0s = table.numbers("v0");
  const values = table.numbers(valueCol);
  const status = table.hasColumn("status") ? table.column("status") : null;

  const tauGrid = uniqueSorted(taus.filter(Number.isFinite));
  const v0Grid = uniqueSorted(v0s.filter(Number.isFinite));
  if (tauGrid.length === 0 || v0Grid.length === 0) {
    throw new Error(`${input}: no tau/v0 grid points`);
  }

  const cell = new Map<string, number>();
  for (let i = 0; i < taus.length; i++) {
    const ok = status === null || status[i] === "ok";
    cell.set(`${taus[i]}|${v0s[i]}`, ok ? values[i] : NaN);
  }

  const canvas = new Canvas(FIGURE_W, FIGURE_H);
  const rect = plotRect(canvas);
  rect.x1 -= 58; // room for the colorbar

  const tauEdges = logEdges(tauGrid);
  const v0Edges = logEdges(v0Grid);
  const x = logScale(tauEdges[0], tauEdges[tauEdges.length - 1], rect.x0, rect.x1);
  const y = logScale(v0Edges[0], v0Edges[v0Edges.length - 1], rect.y1, rect.y0);

  const vr = finiteRange(cell.values());
  const span = vr.max - vr.min || 1;

  for (let iv = 0; iv < v0Grid.length; iv++) {
    for (let it = 0; it < tauGrid.length; it++) {
      const v = cell.get(`${tauGrid[it]}|${v0Grid[iv]}`);
      const color: RGB = v === undefined || !Number.isFinite(v)
        ? [210, 210, 210]
        : colormap((v - vr.min) / span);
      const px0 = x.toPx(tauEdges[it]);
      const px1 = x.toPx(tauEdges[it + 1]);
      const py1 = y.toPx(v0Edges[iv]);
      const py0 = y.toPx(v0Edges[iv + 1]);
      canvas.fillRect(px0, py0, px1 - px0, py1 - py0, color);
    }
  }

  // Dashed boundary of the white-noise regime: v0 * tau^2 = (9/(2pi))^(1/4).
  const cx: number[] = [];
  const cy: number[] = [];
  for (let k = 0; k <= 256; k++) {
    const tau = x.min * (x.max / x.min) ** (k / 256);
    const v0 = WN_VALIDITY_VTILDE / tau ** 2;
    if (v0 < y.min || v0 > y.max) continue;
    cx.push(x.toPx(tau));
    cy.push(y.toPx(v0));
  }
  canvas.polyline(cx, cy, WHITE, [6, 5]);
  canvas.polyline(cx.map((v) => v + 1), cy, BLACK, [6, 5]);

  for (const m of EXPERIMENT_MARKERS) {
    if (m.tau < x.min || m.tau > x.max || m.v0 < y.min || m.v0 > y.max) continue;
    canvas.triangle(x.toPx(m.tau), y.toPx(m.v0), 9, WHITE);
    canvas.triangle(x.toPx(m.tau), y.toPx(m.v0), 7, BLACK);
    canvas.text(x.toPx(m.tau) + 8, y.toPx(m.v0) - 4, m.label, BLACK);
  }

  // Colorbar.
  const bx = rect.x1 + 16;
  for (let py = rect.y0; py <= rect.y1; py++) {
    const u = (rect.y1 - py) / (rect.y1 - rect.y0);
    const c = colormap(u);
    for (let w = 0; w < 14; w++) canvas.set(bx + w, py, c);
  }
  canvas.text(bx, rect.y0 - FONT_H - 2, fmtNumber(vr.max), BLACK);
  canvas.text(bx, rect.y1 + 4, fmtNumber(vr.min), BLACK);

  drawFrame(canvas, rect, x, y, { title: valueCol.replace(/_/g, " "), xLabel: "tau", yLabel: "v0" });
  return canvas;
}

// ---------------------------------------------------------------------------
// raster

export function renderRaster(gridPath: string, scintPath?: string): Canvas {
  const grid = readGrid(gridPath);
  const scint = scintPath === undefined ? null : readSeries(scintPath);

  // Subsample large grids to at most one data cell per pixel.
  const maxW = 768;
  const maxH = 512;
  const sx = Math.max(1, Math.ceil(grid.cols / maxW));
  const sy = Math.max(1, Math.ceil(grid.rows / maxH));
  const w = Math.ceil(grid.cols / sx);
  const h = Math.ceil(grid.rows / sy);

  const canvas = new Canvas(w + 62 + 14, h + 24 + 40, WHITE);
  const rect: PlotRect = { x0: 62, y0: 24, x1: 62 + w, y1: 24 + h };

  let vmax = 0;
  for (const v of grid.data) {
    if (Number.isFinite(v) && Math.abs(v) > vmax) vmax = Math.abs(v);
  }
  if (vmax === 0) vmax = 1;

  // Dark background, bright filaments; gamma lift for visibility.
  for (let iy = 0; iy < h; iy++) {
    for (let ix = 0; ix < w; ix++) {
      let v = 0;
      for (let ry = iy * sy; ry < Math.min((iy + 1) * sy, grid.rows); ry++) {
        for (let rx = ix * sx; rx < Math.min((ix + 1) * sx, grid.cols); rx++) {
          const a = Math.abs(gridValue(grid, ry, rx));
          if (a > v) v = a;
        }
      }
      const g = Math.round(255 * (v / vmax) ** 0.7);
      // Row 0 is t = 0, drawn at the bottom.
      canvas.set(rect.x0 + ix, rect.y1 - 1 - iy, [g, g, g]);
    }
  }

  const xMax = grid.cols * grid.dx;
  const tMax = grid.rows * grid.dt;
  const { x, y } = makeScales(rect, 0, xMax, 0, tMax, false, false);

  if (scint !== null) {
    const sMax = Math.max(...scint.value.filter(Number.isFinite), 1e-300);
    const px = scint.value.map((s) => rect.x0 + (s / sMax) * 0.4 * w);
    const py = scint.t.map((t) => y.toPx(t));
    canvas.polyline(px, py, WHITE);
    canvas.polyline(px.map((v) => v + 1), py, WHITE);
    canvas.text(rect.x0 + 6, rect.y0 + 4, `s(t), peak ${fmtNumber(sMax)}`, WHITE);
  }

  const title = `amplitude v0=${fmtNumber(grid.v0)} tau=${fmtNumber(grid.tau)} seed=${grid.seed}`;
  drawFrame(canvas, rect, x, y, { title, xLabel: "x", yLabel: "t" });
  return canvas;
}
