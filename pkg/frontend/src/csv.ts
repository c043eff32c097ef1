/**
 * Reader for the simulation CSV outputs: optional '#'-prefixed
 * "key = value" provenance lines, then a header row, then data rows.
 */

import * as fs from "node:fs";

export class CsvTable {
  constructor(
    readonly path: string,
    readonly meta: Record<string, string>,
    readonly columns: string[],
    readonly cells: string[][],
  ) {}

  get rowCount(): number {
    return this.cells.length;
  }

  hasColumn(name: string): boolean {
    return this.columns.includes(name);
  }

  column(name: string): string[] {
    const idx = this.columns.indexOf(name);
    if (idx < 0) {
      throw new Error(
        `column '${name}' not found in ${this.path} (have: ${this.columns.join(", ")})`,
      );
    }
    return this.cells.map((row) => row[idx] ?? "");
  }

  /** Column as floats; non-numeric cells (including "nan") become NaN. */
  numbers(name: string): number[] {
    return this.column(name).map((s) => (s === "" ? NaN : Number(s)));
  }

  metaNumber(key: string): number | undefined {
    const raw = this.meta[key];
    if (raw === undefined) return undefined;
    const v = Number(raw);
    return Number.isFinite(v) ? v : undefined;
  }
}

export function readCsv(path: string): CsvTable {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }

  const meta: Record<string, string> = {};
  let header: string[] | null = null;
  const cells: string[][] = [];

  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    if (line === "") continue;
    if (line.startsWith("#")) {
      const eq = line.indexOf("=");
      if (eq > 0) {
        meta[line.slice(1, eq).trim()] = line.slice(eq + 1).trim();
      }
      continue;
    }
    const fields = line.split(",").map((s) => s.trim());
    if (header === null) {
      header = fields;
      continue;
    }
    if (fields.length !== header.length) {
      throw new Error(
        `${path}: row ${cells.length + 1} has ${fields.length} fields, expected ${header.length}`,
      );
    }
    cells.push(fields);
  }

  if (header === null) {
    throw new Error(`${path}: no header row found`);
  }
  if (cells.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return new CsvTable(path, meta, header, cells);
}

/** (t, value, stderr) convenience view of an observable series file. */
export interface SeriesData {
  table: CsvTable;
  t: number[];
  value: number[];
  stderr: number[];
}

export function readSeries(path: string): SeriesData {
  const table = readCsv(path);
  for (const col of ["t", "value"]) {
    if (!table.hasColumn(col)) {
      throw new Error(
        `${path}: expected a series file with 't' and 'value' columns, got ${table.columns.join(", ")}`,
      );
    }
  }
  return {
    table,
    t: table.numbers("t"),
    value: table.numbers("value"),
    stderr: table.hasColumn("stderr")
      ? table.numbers("stderr")
      : new Array(table.rowCount).fill(0),
  };
}
