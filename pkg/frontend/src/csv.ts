/**
 * Strict readers for the simulation CSV contracts.
 *
 * The sweep header must match the harness contract exactly; the other two
 * formats are the documented outputs of the `tvd-curve` and `break-even`
 * subcommands. A missing column fails fast with its name.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class CsvError extends Error {
  constructor(message: string, readonly missingField?: string) {
    super(message);
    this.name = "CsvError";
  }
}

export const SWEEP_HEADER = [
  "d",
  "p",
  "q",
  "sigma",
  "backend",
  "t",
  "pl",
  "stderr",
  "n",
] as const;

export const TVD_HEADER = ["sigma", "p_best", "delta_min", "delta_at_p_equiv"] as const;

export const BREAK_EVEN_HEADER = [
  "kind",
  "p",
  "q",
  "pl",
  "stderr",
  "green",
  "t_meas",
] as const;

export interface SweepRow {
  d: number;
  p: number;
  q: number;
  sigma: number;
  backend: string;
  t: number;
  pl: number;
  stderr: number;
  n: number;
}

export interface TvdRow {
  sigma: number;
  p_best: number;
  delta_min: number;
  delta_at_p_equiv: number;
}

export interface BreakEvenRow {
  kind: "grid" | "hardware";
  p: number;
  q: number;
  pl: number;
  stderr: number;
  green: boolean;
  t_meas: number | null;
}

function parseFile(path: string): { header: string[]; records: Record<string, string>[] } {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new CsvError(`failed to parse ${path}: ${parsed.errors[0].message}`);
  }
  const header = (parsed.meta.fields ?? []).map((f) => f.trim());
  return { header, records: parsed.data };
}

function requireColumns(header: string[], required: readonly string[], path: string): void {
  for (const col of required) {
    if (!header.includes(col)) {
      throw new CsvError(`${path}: missing required column '${col}'`, col);
    }
  }
}

function num(record: Record<string, string>, field: string, path: string): number {
  const value = Number(record[field]);
  if (!Number.isFinite(value)) {
    throw new CsvError(`${path}: non-numeric value '${record[field]}' in column '${field}'`);
  }
  return value;
}

export function readSweep(path: string): SweepRow[] {
  const { header, records } = parseFile(path);
  requireColumns(header, SWEEP_HEADER, path);
  if (records.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return records.map((r) => ({
    d: num(r, "d", path),
    p: num(r, "p", path),
    q: num(r, "q", path),
    sigma: num(r, "sigma", path),
    backend: r.backend,
    t: num(r, "t", path),
    pl: num(r, "pl", path),
    stderr: num(r, "stderr", path),
    n: num(r, "n", path),
  }));
}

export function readTvd(path: string): TvdRow[] {
  const { header, records } = parseFile(path);
  requireColumns(header, TVD_HEADER, path);
  if (records.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return records.map((r) => ({
    sigma: num(r, "sigma", path),
    p_best: num(r, "p_best", path),
    delta_min: num(r, "delta_min", path),
    delta_at_p_equiv: num(r, "delta_at_p_equiv", path),
  }));
}

export function readBreakEven(path: string): BreakEvenRow[] {
  const { header, records } = parseFile(path);
  requireColumns(header, BREAK_EVEN_HEADER, path);
  if (records.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return records.map((r) => {
    const kind = r.kind;
    if (kind !== "grid" && kind !== "hardware") {
      throw new CsvError(`${path}: unknown kind '${kind}'`);
    }
    return {
      kind,
      p: num(r, "p", path),
      q: num(r, "q", path),
      pl: num(r, "pl", path),
      stderr: num(r, "stderr", path),
      green: r.green === "1" || r.green === "true",
      t_meas: r.t_meas === "" ? null : num(r, "t_meas", path),
    };
  });
}
