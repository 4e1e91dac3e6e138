import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { CsvError, readBreakEven, readSweep, readTvd } from "../src/csv.js";

const FIXTURES = join(__dirname, "..", "fixtures");

function tmpCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "renderfig-"));
  const path = join(dir, "data.csv");
  writeFileSync(path, content);
  return path;
}

describe("sweep reader", () => {
  it("reads the committed threshold fixture", () => {
    const rows = readSweep(join(FIXTURES, "threshold.csv"));
    expect(rows.length).toBe(15);
    expect(new Set(rows.map((r) => r.d))).toEqual(new Set([7, 9, 11]));
    expect(rows.every((r) => r.pl > 0 && r.stderr > 0)).toBe(true);
  });

  it("names the missing column", () => {
    const path = tmpCsv("d,p,q,sigma,backend,t,pl,stderr\n3,0.1,0.1,0.2,pauli,3,0.01,0.001\n");
    try {
      readSweep(path);
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(CsvError);
      expect((err as CsvError).missingField).toBe("n");
      expect((err as CsvError).message).toContain("'n'");
    }
  });

  it("rejects empty sweeps", () => {
    const path = tmpCsv("d,p,q,sigma,backend,t,pl,stderr,n\n");
    expect(() => readSweep(path)).toThrow(CsvError);
  });

  it("rejects non-numeric cells", () => {
    const path = tmpCsv(
      "d,p,q,sigma,backend,t,pl,stderr,n\n3,oops,0.1,0.2,pauli,3,0.01,0.001,10\n",
    );
    expect(() => readSweep(path)).toThrow(/non-numeric/);
  });
});

describe("tvd reader", () => {
  it("reads the committed fixture in sigma order", () => {
    const rows = readTvd(join(FIXTURES, "tvd_curve.csv"));
    expect(rows.length).toBe(10);
    const sigmas = rows.map((r) => r.sigma);
    expect([...sigmas].sort((a, b) => a - b)).toEqual(sigmas);
  });

  it("flags a wrong header", () => {
    const path = tmpCsv("sigma,delta\n0.1,0.01\n");
    expect(() => readTvd(path)).toThrow(/missing required column 'p_best'/);
  });
});

describe("break-even reader", () => {
  it("reads grid and hardware rows", () => {
    const rows = readBreakEven(join(FIXTURES, "break_even.csv"));
    const grid = rows.filter((r) => r.kind === "grid");
    const hw = rows.filter((r) => r.kind === "hardware");
    expect(grid.length).toBe(20);
    expect(hw.length).toBe(5);
    expect(hw.every((r) => r.t_meas !== null)).toBe(true);
    expect(hw.every((r) => r.green)).toBe(true);
  });

  it("rejects unknown kinds", () => {
    const path = tmpCsv("kind,p,q,pl,stderr,green,t_meas\nblue,0.1,0.1,0.01,0.001,1,\n");
    expect(() => readBreakEven(path)).toThrow(/unknown kind/);
  });
});
