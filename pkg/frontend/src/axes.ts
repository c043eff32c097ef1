/**
 * Linear and log axis scales, tick selection and frame drawing.
 */

import { BLACK, Canvas, FONT_H, FONT_W, GRAY, type RGB } from "./canvas.js";

export interface Tick {
  value: number;
  label: string;
}

export interface Scale {
  readonly kind: "linear" | "log";
  readonly min: number;
  readonly max: number;
  toPx(value: number): number;
  ticks(): Tick[];
}

export function fmtNumber(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const e = Math.floor(Math.log10(a));
    const m = v / 10 ** e;
    const ms = Math.abs(m - Math.round(m)) < 1e-9
      ? String(Math.round(m))
      : m.toFixed(1);
    return `${ms}e${e}`;
  }
  let s = a >= 100 ? v.toFixed(0) : a >= 1 ? v.toFixed(2) : v.toFixed(3);
  if (s.includes(".")) s = s.replace(/0+$/, "").replace(/\.$/, "");
  return s;
}

/** 1-2-5 tick values covering [min, max]. */
export function linearTicks(min: number, max: number, target = 5): number[] {
  const span = max - min;
  if (!(span > 0)) return [min];
  const raw = span / target;
  const mag = 10 ** Math.floor(Math.log10(raw));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) { step = m * mag; break; }
  }
  const out: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export function linearScale(min: number, max: number,
                            pxLo: number, pxHi: number): Scale {
  if (!(max > min)) {
    const pad = Math.abs(min) > 0 ? Math.abs(min) * 0.1 : 1;
    min -= pad;
    max += pad;
  }
  const k = (pxHi - pxLo) / (max - min);
  return {
    kind: "linear",
    min,
    max,
    toPx: (v) => pxLo + (v - min) * k,
    ticks: () => linearTicks(min, max).map((v) => ({ value: v, label: fmtNumber(v) })),
  };
}

export function logScale(min: number, max: number,
                         pxLo: number, pxHi: number): Scale {
  if (!(min > 0) || !(max > min)) {
    throw new Error(`log axis needs positive increasing range, got [${min}, ${max}]`);
  }
  const lmin = Math.log10(min);
  const lmax = Math.log10(max);
  const k = (pxHi - pxLo) / (lmax - lmin);
  const ticks = (): Tick[] => {
    const out: Tick[] = [];
    const e0 = Math.ceil(lmin - 1e-9);
    const e1 = Math.floor(lmax + 1e-9);
    for (let e = e0; e <= e1; e++) {
      out.push({ value: 10 ** e, label: e === 0 ? "1" : `1e${e}` });
    }
    if (out.length <= 1) {
      // Less than one decade: fall back to a few linear ticks.
      return linearTicks(min, max, 4).map((v) => ({ value: v, label: fmtNumber(v) }));
    }
    return out;
  };
  return {
    kind: "log",
    min,
    max,
    toPx: (v) => pxLo + (Math.log10(v) - lmin) * k,
    ticks,
  };
}

export interface PlotRect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export const MARGIN = { left: 62, right: 14, top: 24, bottom: 40 };

export function plotRect(canvas: Canvas): PlotRect {
  return {
    x0: MARGIN.left,
    y0: MARGIN.top,
    x1: canvas.width - MARGIN.right,
    y1: canvas.height - MARGIN.bottom,
  };
}

export function makeScales(rect: PlotRect, xMin: number, xMax: number,
                           yMin: number, yMax: number,
                           logX: boolean, logY: boolean): { x: Scale; y: Scale } {
  const x = logX ? logScale(xMin, xMax, rect.x0, rect.x1)
                 : linearScale(xMin, xMax, rect.x0, rect.x1);
  // Pixel y grows downward.
  const y = logY ? logScale(yMin, yMax, rect.y1, rect.y0)
                 : linearScale(yMin, yMax, rect.y1, rect.y0);
  return { x, y };
}

export interface FrameLabels {
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

/** Box, ticks, tick labels and axis captions around the plot area. */
export function drawFrame(canvas: Canvas, rect: PlotRect, x: Scale, y: Scale,
                          labels: FrameLabels): void {
  const c: RGB = BLACK;
  canvas.line(rect.x0, rect.y0, rect.x1, rect.y0, c);
  canvas.line(rect.x0, rect.y1, rect.x1, rect.y1, c);
  canvas.line(rect.x0, rect.y0, rect.x0, rect.y1, c);
  canvas.line(rect.x1, rect.y0, rect.x1, rect.y1, c);

  for (const t of x.ticks()) {
    const px = Math.round(x.toPx(t.value));
    if (px < rect.x0 - 1 || px > rect.x1 + 1) continue;
    canvas.line(px, rect.y1, px, rect.y1 + 4, c);
    canvas.text(px - canvas.textWidth(t.label) / 2, rect.y1 + 7, t.label, GRAY);
  }
  for (const t of y.ticks()) {
    const py = Math.round(y.toPx(t.value));
    if (py < rect.y0 - 1 || py > rect.y1 + 1) continue;
    canvas.line(rect.x0 - 4, py, rect.x0, py, c);
    const w = canvas.textWidth(t.label);
    canvas.text(rect.x0 - 6 - w, py - FONT_H / 2 + 1, t.label, GRAY);
  }

  if (labels.title) {
    const w = canvas.textWidth(labels.title);
    canvas.text((rect.x0 + rect.x1 - w) / 2, 8, labels.title, BLACK);
  }
  if (labels.xLabel) {
    const w = canvas.textWidth(labels.xLabel);
    canvas.text((rect.x0 + rect.x1 - w) / 2, canvas.height - FONT_H - 6,
                labels.xLabel, BLACK);
  }
  if (labels.yLabel) {
    // No rotated text in the bitmap font; stack the label above the axis.
    canvas.text(4, rect.y0 - FONT_H - 4, labels.yLabel, BLACK);
  }
}

/** Small legend block in the top-right corner of the plot area. */
export function drawLegend(canvas: Canvas, rect: PlotRect,
                           entries: { label: string; color: RGB; dashed?: boolean }[]): void {
  if (entries.length === 0) return;
  const wMax = Math.max(...entries.map((e) => canvas.textWidth(e.label)));
  const x = rect.x1 - wMax - 34;
  let y = rect.y0 + 6;
  for (const e of entries) {
    const yMid = y + FONT_H / 2 - 1;
    canvas.line(x, yMid, x + 18, yMid, e.color, e.dashed ? [4, 3] : undefined);
    canvas.text(x + 24, y, e.label, BLACK);
    y += FONT_H + 3;
  }
}
