#!/usr/bin/env node
/**
 * render_fig <kind> <csv> <out.svg>
 *
 * kinds: tvd-curve | threshold | break-even
 * Exits 2 on usage errors or contract violations (e.g. a missing column,
 * reported by name), 0 on success.
 */

import { realpathSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { CsvError, readBreakEven, readSweep, readTvd } from "./csv.js";
import { renderBreakEven, renderThreshold, renderTvdCurve } from "./figures.js";

export const KINDS = ["tvd-curve", "threshold", "break-even"] as const;
export type Kind = (typeof KINDS)[number];

export function render(kind: Kind, csvPath: string): string {
  switch (kind) {
    case "tvd-curve":
      return renderTvdCurve(readTvd(csvPath));
    case "threshold":
      return renderThreshold(readSweep(csvPath));
    case "break-even":
      return renderBreakEven(readBreakEven(csvPath));
  }
}

export function main(argv: string[]): number {
  if (argv.length !== 3) {
    console.error("usage: render_fig <tvd-curve|threshold|break-even> <csv> <out.svg>");
    return 2;
  }
  const [kind, csvPath, outPath] = argv;
  if (!KINDS.includes(kind as Kind)) {
    console.error(`unknown figure kind '${kind}' (expected ${KINDS.join(", ")})`);
    return 2;
  }
  try {
    const svg = render(kind as Kind, csvPath);
    writeFileSync(outPath, svg);
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(err.message);
      return 2;
    }
    console.error(String(err));
    return 2;
  }
  return 0;
}

const entry = process.argv[1] ? realpathSync(process.argv[1]) : "";
if (entry && fileURLToPath(import.meta.url) === entry) {
  process.exit(main(process.argv.slice(2)));
}
