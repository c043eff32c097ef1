/**
 * Reader for the binary space-time grid files produced by the simulator.
 *
 * Layout (little endian):
 *   magic   4 bytes  "BFG1" (potential field) or "BFR1" (wave raster)
 *   cols    u32      spatial samples per row
 *   rows    u32      time samples
 *   dx, dt, tau, v0  f64 each
 *   seed, index      u64 each
 *   payload rows*cols f64, row-major (row = fixed time)
 */

import * as fs from "node:fs";

const HEADER_BYTES = 60;
const MAGICS = ["BFG1", "BFR1"] as const;

export interface GridFile {
  path: string;
  magic: string;
  kind: "potential" | "raster";
  cols: number;
  rows: number;
  dx: number;
  dt: number;
  tau: number;
  v0: number;
  seed: bigint;
  index: bigint;
  data: Float64Array;
}

export function readGrid(path: string): GridFile {
  let buf: Buffer;
  try {
    buf = fs.readFileSync(path);
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }
  if (buf.length < HEADER_BYTES) {
    throw new Error(
      `${path}: too short for a grid header (${buf.length} bytes, need ${HEADER_BYTES})`,
    );
  }

  const magic = buf.toString("latin1", 0, 4);
  if (!(MAGICS as readonly string[]).includes(magic)) {
    throw new Error(
      `${path}: bad magic ${JSON.stringify(magic)}, expected BFG1 or BFR1`,
    );
  }

  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const cols = view.getUint32(4, true);
  const rows = view.getUint32(8, true);
  const dx = view.getFloat64(12, true);
  const dt = view.getFloat64(20, true);
  const tau = view.getFloat64(28, true);
  const v0 = view.getFloat64(36, true);
  const seed = view.getBigUint64(44, true);
  const index = view.getBigUint64(52, true);

  if (cols === 0 || rows === 0) {
    throw new Error(`${path}: empty grid (${rows}x${cols})`);
  }
  const expected = HEADER_BYTES + rows * cols * 8;
  if (buf.length !== expected) {
    throw new Error(
      `${path}: payload size mismatch for ${rows}x${cols} grid ` +
      `(file has ${buf.length} bytes, expected ${expected})`,
    );
  }

  // Copy so the view is 8-aligned regardless of Buffer pool offsets.
  const payload = buf.subarray(HEADER_BYTES);
  const data = new Float64Array(rows * cols);
  const pview = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  for (let i = 0; i < data.length; i++) {
    data[i] = pview.getFloat64(8 * i, true);
  }

  return {
    path,
    magic,
    kind: magic === "BFG1" ? "potential" : "raster",
    cols,
    rows,
    dx,
    dt,
    tau,
    v0,
    seed,
    index,
    data,
  };
}

export function gridValue(g: GridFile, row: number, col: number): number {
  return g.data[row * g.cols + col];
}
