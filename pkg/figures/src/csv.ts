/**
 * Strict readers for the three benchmark CSV schemas.
 *
 * The benchmark tool writes one of three fixed headers; anything
 * else (renamed, missing or extra columns, ragged rows, non-numeric
 * fields, missing data) is rejected with a SchemaError so a broken
 * input can never produce a silently wrong figure.
 */

export class SchemaError extends Error {}

export interface ConvergenceRow {
  checkpoint: number;
  variant: string;
  q05: number;
  q25: number;
  q50: number;
  q75: number;
  q95: number;
}

export interface TreeCurveRow {
  checkpoint: number;
  variant: string;
  mMean: number;
  sigmaMean: number;
}

export interface BoxGridRow {
  panel: string;
  d: number;
  min: number;
  q25: number;
  q50: number;
  q75: number;
  max: number;
}

export const CONVERGENCE_COLUMNS = [
  "checkpoint",
  "variant",
  "q05",
  "q25",
  "q50",
  "q75",
  "q95",
] as const;

export const TREE_CURVE_COLUMNS = [
  "checkpoint",
  "variant",
  "m_mean",
  "sigma_mean",
] as const;

export const BOX_GRID_COLUMNS = [
  "panel",
  "d",
  "min",
  "q25",
  "q50",
  "q75",
  "max",
] as const;

function splitTable(text: string, columns: readonly string[]): string[][] {
  const lines = text.split("\n");
  if (lines[lines.length - 1] === "") {
    lines.pop();
  }
  const expected = columns.join(",");
  if (lines.length === 0 || lines[0].trim() === "") {
    throw new SchemaError(`empty file, expected header "${expected}"`);
  }
  if (lines[0] !== expected) {
    throw new SchemaError(
      `header mismatch: expected "${expected}", got "${lines[0]}"`
    );
  }
  if (lines.length === 1) {
    throw new SchemaError("no data rows after the header");
  }
  return lines.slice(1).map((line, i) => {
    const fields = line.split(",");
    if (fields.length !== columns.length) {
      throw new SchemaError(
        `line ${i + 2}: expected ${columns.length} fields, got ${fields.length}`
      );
    }
    return fields;
  });
}

function num(field: string, column: string, line: number): number {
  const value = field.trim() === "" ? NaN : Number(field);
  if (!Number.isFinite(value)) {
    throw new SchemaError(
      `line ${line}: column "${column}" is not a finite number: "${field}"`
    );
  }
  return value;
}

export function parseConvergence(text: string): ConvergenceRow[] {
  return splitTable(text, CONVERGENCE_COLUMNS).map((f, i) => ({
    checkpoint: num(f[0], "checkpoint", i + 2),
    variant: f[1],
    q05: num(f[2], "q05", i + 2),
    q25: num(f[3], "q25", i + 2),
    q50: num(f[4], "q50", i + 2),
    q75: num(f[5], "q75", i + 2),
    q95: num(f[6], "q95", i + 2),
  }));
}

export function parseTreeCurve(text: string): TreeCurveRow[] {
  return splitTable(text, TREE_CURVE_COLUMNS).map((f, i) => ({
    checkpoint: num(f[0], "checkpoint", i + 2),
    variant: f[1],
    mMean: num(f[2], "m_mean", i + 2),
    sigmaMean: num(f[3], "sigma_mean", i + 2),
  }));
}

export function parseBoxGrid(text: string): BoxGridRow[] {
  return splitTable(text, BOX_GRID_COLUMNS).map((f, i) => ({
    panel: f[0],
    d: num(f[1], "d", i + 2),
    min: num(f[2], "min", i + 2),
    q25: num(f[3], "q25", i + 2),
    q50: num(f[4], "q50", i + 2),
    q75: num(f[5], "q75", i + 2),
    max: num(f[6], "max", i + 2),
  }));
}
