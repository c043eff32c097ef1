#!/usr/bin/env node
/**
 * Figure renderer for the branched-flow simulation outputs.
 *
 * Usage:
 *   bfrender render <recipe.json>
 *   bfrender --heatmap sweep.csv [--value=COL] --out fig.png
 *   bfrender --raster grid.bin [--scint=scint.csv] --out fig.png
 *   bfrender --curves a.csv,b.csv [--overlay=wn_ek,rf_ek] --out fig.png
 *   bfrender --loglog table.csv [--x=vtilde] [--y=tb_over_tau,te_over_tau]
 *            [--slopes=-2/3,-1/2,-1] --out fig.png
 */

import * as fs from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { loadRecipe, render, validateRecipe, type FigureRecipe } from "./recipe.js";

const USAGE = `usage:
  bfrender render <recipe.json>
  bfrender --heatmap sweep.csv [--value=COL] --out fig.png
  bfrender --raster grid.bin [--scint=scint.csv] --out fig.png
  bfrender --curves a.csv,b.csv [--overlay=wn_ek,rf_ek] --out fig.png
  bfrender --loglog table.csv [--x=vtilde] [--y=cols] [--slopes=-2/3,-1/2,-1] --out fig.png

recipe JSON: {"kind": "heatmap|raster|curves|loglog", "inputs": [...],
              "output": "fig.png", "overlay"/"value"/"x"/"y"/"slopes": "..."}
overlays: wn_ek, rf_ek, wn_sigma2, free_sigma2 (parameters from the input's
provenance header).`;

export function buildRecipe(argv: string[]): FigureRecipe | null {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      heatmap: { type: "string" },
      raster: { type: "string" },
      curves: { type: "string" },
      loglog: { type: "string" },
      scint: { type: "string" },
      overlay: { type: "string" },
      value: { type: "string" },
      x: { type: "string" },
      y: { type: "string" },
      slopes: { type: "string" },
      out: { type: "string" },
      help: { type: "boolean", short: "h" },
    },
  });

  if (values.help) return null;

  if (positionals[0] === "render") {
    if (positionals.length !== 2) {
      throw new Error("render takes exactly one recipe file");
    }
    return loadRecipe(positionals[1]);
  }
  if (positionals.length > 0) {
    throw new Error(`unexpected argument '${positionals[0]}'`);
  }

  const kinds = (["heatmap", "raster", "curves", "loglog"] as const)
    .filter((k) => values[k] !== undefined);
  if (kinds.length === 0) {
    throw new Error("pick a figure kind (--heatmap/--raster/--curves/--loglog) or use 'render <recipe>'");
  }
  if (kinds.length > 1) {
    throw new Error(`one figure per invocation, got --${kinds.join(" and --")}`);
  }
  if (values.out === undefined) {
    throw new Error("--out is required");
  }

  const kind = kinds[0];
  const inputs = kind === "raster"
    ? [values.raster!, ...(values.scint !== undefined ? [values.scint] : [])]
    : values[kind]!.split(",").map((s) => s.trim()).filter((s) => s !== "");

  return validateRecipe({
    kind,
    inputs,
    output: values.out,
    overlay: values.overlay,
    value: values.value,
    x: values.x,
    y: values.y,
    slopes: values.slopes,
  }, "command line");
}

export function main(argv: string[]): number {
  let recipe: FigureRecipe | null;
  try {
    recipe = buildRecipe(argv);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    process.stderr.write(USAGE + "\n");
    return 2;
  }
  if (recipe === null) {
    process.stdout.write(USAGE + "\n");
    return 0;
  }
  try {
    const out = render(recipe);
    process.stdout.write(`wrote ${out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

// Run only when invoked as a script (also through the npm bin symlink).
const entry = process.argv[1];
if (entry !== undefined &&
    import.meta.url === pathToFileURL(fs.realpathSync(entry)).href) {
  process.exitCode = main(process.argv.slice(2));
}
