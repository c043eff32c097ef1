/**
 * Figure recipes: a small JSON description of what to draw from which
 * simulation outputs, and the dispatcher that turns one into a PNG file.
 */

import * as fs from "node:fs";

import type { Canvas } from "./canvas.js";
import { renderCurves, renderHeatmap, renderLoglog, renderRaster } from "./figures.js";
import { parseOverlaySpec } from "./overlays.js";
import { encodePng } from "./png.js";

export const FIGURE_KINDS = ["heatmap", "raster", "curves", "loglog"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureRecipe {
  kind: FigureKind;
  /** Input files; meaning depends on kind (see render). */
  inputs: string[];
  /** Comma-separated analytic overlays for curves figures. */
  overlay?: string;
  /** Output PNG path. */
  output: string;
  /** Heatmap: which column to color by. */
  value?: string;
  /** Loglog: x column name. */
  x?: string;
  /** Loglog: comma-separated y column names. */
  y?: string;
  /** Loglog: comma-separated guide slopes; fractions like -2/3 allowed. */
  slopes?: string;
}

export function parseSlopes(spec: string): number[] {
  return spec.split(",").map((s) => s.trim()).filter((s) => s !== "").map((s) => {
    const frac = s.match(/^(-?\d+(?:\.\d+)?)\/(-?\d+(?:\.\d+)?)$/);
    const v = frac ? Number(frac[1]) / Number(frac[2]) : Number(s);
    if (!Number.isFinite(v)) throw new Error(`bad slope value '${s}'`);
    return v;
  });
}

export function loadRecipe(path: string): FigureRecipe {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read recipe ${path}: ${(err as Error).message}`);
  }
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new Error(`recipe ${path} is not valid JSON: ${(err as Error).message}`);
  }
  return validateRecipe(raw, path);
}

export function validateRecipe(raw: unknown, source = "recipe"): FigureRecipe {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error(`${source}: expected a JSON object`);
  }
  const obj = raw as Record<string, unknown>;

  const kind = obj["kind"];
  if (typeof kind !== "string" || !(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new Error(
      `${source}: kind must be one of ${FIGURE_KINDS.join(", ")}, got ${JSON.stringify(kind)}`,
    );
  }

  const inputs = obj["inputs"];
  if (!Array.isArray(inputs) || inputs.length === 0 ||
      !inputs.every((p) => typeof p === "string" && p !== "")) {
    throw new Error(`${source}: inputs must be a non-empty array of file paths`);
  }

  const output = obj["output"];
  if (typeof output !== "string" || output === "") {
    throw new Error(`${source}: output must be a file path`);
  }

  const recipe: FigureRecipe = { kind: kind as FigureKind, inputs: inputs as string[], output };
  for (const key of ["overlay", "value", "x", "y", "slopes"] as const) {
    const v = obj[key];
    if (v === undefined) continue;
    if (typeof v !== "string") {
      throw new Error(`${source}: ${key} must be a string`);
    }
    recipe[key] = v;
  }
  return recipe;
}

export function renderToCanvas(recipe: FigureRecipe): Canvas {
  switch (recipe.kind) {
    case "curves":
      return renderCurves(recipe.inputs, parseOverlaySpec(recipe.overlay ?? ""));
    case "loglog": {
      const yCols = (recipe.y ?? "tb_over_tau,te_over_tau")
        .split(",").map((s) => s.trim()).filter((s) => s !== "");
      return renderLoglog(recipe.inputs[0], recipe.x ?? "vtilde", yCols,
                          parseSlopes(recipe.slopes ?? "-2/3,-1/2,-1"));
    }
    case "heatmap":
      return renderHeatmap(recipe.inputs[0], recipe.value ?? "chi_class_vs_quant");
    case "raster":
      return renderRaster(recipe.inputs[0], recipe.inputs[1]);
  }
}

/** Render a recipe and write the PNG; returns the output path. */
export function render(recipe: FigureRecipe): string {
  let canvas: Canvas;
  try {
    canvas = renderToCanvas(recipe);
  } catch (err) {
    throw new Error(`${recipe.kind} figure: ${(err as Error).message}`);
  }
  const png = encodePng(canvas.width, canvas.height, canvas.data);
  fs.writeFileSync(recipe.output, png);
  return recipe.output;
}
