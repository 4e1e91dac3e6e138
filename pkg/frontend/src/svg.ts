/**
 * Minimal deterministic SVG construction: linear/log scales, nice ticks,
 * axes, and shape helpers. Everything is plain string assembly with fixed
 * fonts and formatting so identical inputs give identical bytes.
 */

export interface Scale {
  (value: number): number;
  ticks(): number[];
  domain: [number, number];
}

const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function fmt(x: number): string {
  if (x === 0) return "0";
  const abs = Math.abs(x);
  if (abs >= 0.01 && abs < 10000) {
    return Number(x.toPrecision(6)).toString();
  }
  return x.toExponential(2).replace("e-", "e-").replace("e+", "e");
}

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 5,
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.ticks = () => {
    const step = niceStep(span, tickCount);
    const start = Math.ceil(d0 / step) * step;
    const out: number[] = [];
    for (let v = start; v <= d1 + 1e-12 * Math.abs(step); v += step) {
      out.push(Number(v.toPrecision(12)));
    }
    return out;
  };
  return scale;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error("log scale needs positive bounds");
  }
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0 || 1;
  const scale = ((value: number) =>
    r0 + ((Math.log10(value) - l0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.ticks = () => {
    const out: number[] = [];
    for (let e = Math.ceil(l0 - 1e-9); e <= Math.floor(l1 + 1e-9); e += 1) {
      out.push(Math.pow(10, e));
    }
    if (out.length === 0) out.push(d0, d1);
    return out;
  };
  return scale;
}

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 440,
  left: 78,
  right: 24,
  top: 30,
  bottom: 58,
};

export function axes(
  frame: Frame,
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  title: string,
): string {
  const parts: string[] = [];
  const x0 = frame.left;
  const x1 = frame.width - frame.right;
  const y0 = frame.height - frame.bottom;
  const y1 = frame.top;
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  for (const t of x.ticks()) {
    const px = x(t).toFixed(2);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="12" ${FONT}>${esc(fmt(t))}</text>`,
    );
  }
  for (const t of y.ticks()) {
    const py = y(t).toFixed(2);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`);
    parts.push(
      `<text x="${x0 - 9}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="12" ${FONT}>${esc(fmt(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${frame.height - 14}" text-anchor="middle" font-size="14" ${FONT}>${esc(xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="14" ${FONT} transform="rotate(-90 20 ${(y0 + y1) / 2})">${esc(yLabel)}</text>`,
  );
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${frame.top - 10}" text-anchor="middle" font-size="15" ${FONT}>${esc(title)}</text>`,
  );
  return parts.join("\n");
}

export function polyline(points: Array<[number, number]>, color: string, width = 1.8): string {
  const pts = points.map(([a, b]) => `${a.toFixed(2)},${b.toFixed(2)}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"/>`;
}

export function marker(x: number, y: number, color: string, r = 3): string {
  return `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="${r}" fill="${color}"/>`;
}

export function errorBar(x: number, yLow: number, yHigh: number, color: string): string {
  const cap = 3;
  const px = x.toFixed(2);
  return [
    `<line x1="${px}" y1="${yLow.toFixed(2)}" x2="${px}" y2="${yHigh.toFixed(2)}" stroke="${color}" stroke-width="1.2" class="errorbar"/>`,
    `<line x1="${(x - cap).toFixed(2)}" y1="${yLow.toFixed(2)}" x2="${(x + cap).toFixed(2)}" y2="${yLow.toFixed(2)}" stroke="${color}" stroke-width="1.2"/>`,
    `<line x1="${(x - cap).toFixed(2)}" y1="${yHigh.toFixed(2)}" x2="${(x + cap).toFixed(2)}" y2="${yHigh.toFixed(2)}" stroke="${color}" stroke-width="1.2"/>`,
  ].join("\n");
}

export function document(frame: Frame, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" viewBox="0 0 ${frame.width} ${frame.height}">`,
    `<rect width="${frame.width}" height="${frame.height}" fill="white"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}
