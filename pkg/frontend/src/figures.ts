/**
 * The three figure kinds: best-Pauli distance vs angle spread, logical
 * error rate vs physical rate per distance with the crossing bracketed,
 * and the distance-3 break-even map with the hardware curve.
 */

import type { BreakEvenRow, SweepRow, TvdRow } from "./csv.js";
import {
  DEFAULT_FRAME,
  PALETTE,
  axes,
  document,
  errorBar,
  esc,
  fmt,
  linearScale,
  logScale,
  marker,
  polyline,
} from "./svg.js";

export function renderTvdCurve(rows: TvdRow[]): string {
  const sorted = [...rows].sort((a, b) => a.sigma - b.sigma);
  const frame = DEFAULT_FRAME;
  const x = linearScale(
    [0, Math.max(...sorted.map((r) => r.sigma)) * 1.05],
    [frame.left, frame.width - frame.right],
  );
  const yMin = Math.min(...sorted.map((r) => r.delta_min));
  const yMax = Math.max(...sorted.map((r) => r.delta_min));
  const y = logScale(
    [yMin / 2, yMax * 2],
    [frame.height - frame.bottom, frame.top],
  );
  const parts: string[] = [];
  parts.push(
    axes(
      frame,
      x,
      y,
      "angle spread sigma",
      "distance to best single-parameter flip channel",
      "Best-Pauli approximation error, two detection cycles",
    ),
  );
  parts.push(
    polyline(sorted.map((r) => [x(r.sigma), y(r.delta_min)]), PALETTE[0]),
  );
  for (const r of sorted) {
    parts.push(marker(x(r.sigma), y(r.delta_min), PALETTE[0]));
  }
  return document(frame, parts.join("\n"));
}

/** Linear-interpolated crossing points between every pair of distance curves. */
export function pairwiseCrossings(rows: SweepRow[]): number[] {
  const byD = new Map<number, SweepRow[]>();
  for (const r of rows) {
    const list = byD.get(r.d) ?? [];
    list.push(r);
    byD.set(r.d, list);
  }
  const ds = [...byD.keys()].sort((a, b) => a - b);
  for (const d of ds) {
    byD.get(d)!.sort((a, b) => a.p - b.p);
  }
  const crossings: number[] = [];
  for (let i = 0; i < ds.length; i += 1) {
    for (let j = i + 1; j < ds.length; j += 1) {
      const a = byD.get(ds[i])!;
      const b = byD.get(ds[j])!;
      const n = Math.min(a.length, b.length);
      for (let k = 0; k + 1 < n; k += 1) {
        const d0 = b[k].pl - a[k].pl;
        const d1 = b[k + 1].pl - a[k + 1].pl;
        if (d0 <= 0 && d1 > 0) {
          const t = d0 === d1 ? 0 : -d0 / (d1 - d0);
          crossings.push(a[k].p + t * (a[k + 1].p - a[k].p));
        }
      }
    }
  }
  return crossings;
}

export function renderThreshold(rows: SweepRow[]): string {
  const frame = DEFAULT_FRAME;
  const ps = rows.map((r) => r.p);
  const pls = rows.map((r) => r.pl);
  const errs = rows.map((r) => r.stderr);
  const x = linearScale(
    [Math.min(...ps) * 0.98, Math.max(...ps) * 1.02],
    [frame.left, frame.width - frame.right],
  );
  const yLow = Math.max(Math.min(...pls.map((v, i) => v - 2 * errs[i])) * 0.9, 1e-6);
  const yHigh = Math.max(...pls.map((v, i) => v + 2 * errs[i])) * 1.08;
  const y = linearScale([yLow, yHigh], [frame.height - frame.bottom, frame.top]);

  const parts: string[] = [];
  const crossings = pairwiseCrossings(rows);
  if (crossings.length > 0) {
    const lo = Math.min(...crossings);
    const hi = Math.max(...crossings);
    const pad = 0.0003;
    const x0 = x(lo - pad);
    const x1 = x(hi + pad);
    parts.push(
      `<rect class="crossing-band" x="${x0.toFixed(2)}" y="${frame.top}" width="${(
        x1 - x0
      ).toFixed(2)}" height="${frame.height - frame.top - frame.bottom}" fill="#fff3b0" stroke="none"/>`,
    );
  }
  parts.push(
    axes(
      frame,
      x,
      y,
      "physical error rate p (= readout rate q)",
      "logical error rate",
      "Logical vs physical error rate by code distance",
    ),
  );
  const byD = new Map<number, SweepRow[]>();
  for (const r of rows) {
    const list = byD.get(r.d) ?? [];
    list.push(r);
    byD.set(r.d, list);
  }
  const ds = [...byD.keys()].sort((a, b) => a - b);
  ds.forEach((d, i) => {
    const color = PALETTE[i % PALETTE.length];
    const series = byD.get(d)!.sort((a, b) => a.p - b.p);
    parts.push(polyline(series.map((r) => [x(r.p), y(r.pl)]), color));
    for (const r of series) {
      parts.push(errorBar(x(r.p), y(r.pl - r.stderr), y(r.pl + r.stderr), color));
      parts.push(marker(x(r.p), y(r.pl), color));
    }
    const lx = frame.width - frame.right - 80;
    const ly = frame.top + 18 + 18 * i;
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 24}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
    parts.push(
      `<text x="${lx + 30}" y="${ly}" font-size="13" font-family="Helvetica, Arial, sans-serif">d = ${d}</text>`,
    );
  });
  return document(frame, parts.join("\n"));
}

export function renderBreakEven(rows: BreakEvenRow[]): string {
  const frame = DEFAULT_FRAME;
  const grid = rows.filter((r) => r.kind === "grid");
  const curve = rows.filter((r) => r.kind === "hardware");
  if (grid.length === 0) {
    throw new Error("break-even figure needs grid rows");
  }
  const all = rows;
  const x = logScale(
    [Math.min(...all.map((r) => r.p)) / 1.6, Math.max(...all.map((r) => r.p)) * 1.6],
    [frame.left, frame.width - frame.right],
  );
  const y = logScale(
    [Math.min(...all.map((r) => r.q)) / 1.6, Math.max(...all.map((r) => r.q)) * 1.6],
    [frame.height - frame.bottom, frame.top],
  );
  const parts: string[] = [];
  parts.push(
    axes(
      frame,
      x,
      y,
      "physical error rate p",
      "readout error rate q",
      "Distance-3 break-even map (green: logical beats physical)",
    ),
  );
  const ps = [...new Set(grid.map((r) => r.p))].sort((a, b) => a - b);
  const qs = [...new Set(grid.map((r) => r.q))].sort((a, b) => a - b);
  const halfW = ps.length > 1 ? Math.sqrt(ps[1] / ps[0]) : 1.3;
  const halfH = qs.length > 1 ? Math.sqrt(qs[1] / qs[0]) : 1.3;
  for (const cell of grid) {
    const x0 = x(cell.p / halfW);
    const x1 = x(cell.p * halfW);
    const y1 = y(cell.q / halfH);
    const y0 = y(cell.q * halfH);
    const color = cell.green ? "#74c476" : "#fb6a4a";
    parts.push(
      `<rect class="cell-${cell.green ? "green" : "red"}" x="${x0.toFixed(2)}" y="${y0.toFixed(
        2,
      )}" width="${(x1 - x0).toFixed(2)}" height="${(y1 - y0).toFixed(2)}" fill="${color}" fill-opacity="0.75" stroke="white" stroke-width="0.5"/>`,
    );
  }
  if (curve.length > 0) {
    const sorted = [...curve].sort((a, b) => (a.t_meas ?? 0) - (b.t_meas ?? 0));
    parts.push(
      polyline(sorted.map((r) => [x(r.p), y(r.q)]), "#000000", 2.2),
    );
    for (const r of sorted) {
      parts.push(marker(x(r.p), y(r.q), "#000000", 3.4));
      if (r.t_meas !== null) {
        parts.push(
          `<text x="${(x(r.p) + 6).toFixed(2)}" y="${(y(r.q) - 6).toFixed(2)}" font-size="11" font-family="Helvetica, Arial, sans-serif">${esc(
            fmt(r.t_meas),
          )} us</text>`,
        );
      }
    }
  }
  return document(frame, parts.join("\n"));
}
