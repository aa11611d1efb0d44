/** SVG accuracy-curve chart, rendered to a markup string.
 *
 * Distance runs on a logarithmic x axis (the staircase is geometric, so
 * levels are evenly spaced there). Accuracy spans [0, 1] with guide
 * lines at 1/3, chance under three answers, and at 2/3, the threshold
 * the just-noticeable-difference estimate crosses. The bootstrap
 * interval of each level is drawn as a band behind the curve.
 */

import type { CurvePoint } from "./types.js";

export interface ChartOptions {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const defaultOptions: ChartOptions = {
  width: 560,
  height: 320,
  margin: { top: 14, right: 18, bottom: 40, left: 48 },
};

export type Scale = (value: number) => number;

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = Math.log(d1) - Math.log(d0);
  return (value) => r0 + ((Math.log(value) - Math.log(d0)) / span) * (r1 - r0);
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  return (value) => r0 + ((value - d0) / (d1 - d0)) * (r1 - r0);
}

/** Tick candidates at 1, 2 and 5 times powers of ten inside [lo, hi]. */
export function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  const start = Math.floor(Math.log10(lo)) - 1;
  const stop = Math.ceil(Math.log10(hi)) + 1;
  for (let e = start; e <= stop; e++) {
    for (const m of [1, 2, 5]) {
      const v = m * 10 ** e;
      if (v >= lo * 0.999 && v <= hi * 1.001) out.push(Number(v.toPrecision(12)));
    }
  }
  return out;
}

const px = (v: number) => v.toFixed(1);

export function linePath(points: Array<[number, number]>): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${px(x)},${px(y)}`)
    .join(" ");
}

function bandPoints(
  curve: CurvePoint[],
  x: Scale,
  y: Scale,
): string {
  const upper = curve.map((p) => `${px(x(p.d))},${px(y(p.ci_high))}`);
  const lower = [...curve]
    .reverse()
    .map((p) => `${px(x(p.d))},${px(y(p.ci_low))}`);
  return [...upper, ...lower].join(" ");
}

function tickLabel(v: number): string {
  if (v >= 1) return String(v);
  return v.toFixed(Math.min(3, Math.max(1, -Math.floor(Math.log10(v)))));
}

export function accuracyChart(
  curve: CurvePoint[],
  options: Partial<ChartOptions> = {},
): string {
  const { width, height, margin } = { ...defaultOptions, ...options };
  const innerLeft = margin.left;
  const innerRight = width - margin.right;
  const innerTop = margin.top;
  const innerBottom = height - margin.bottom;

  const open =
    `<svg class="accuracy-chart" viewBox="0 0 ${width} ${height}" ` +
    `role="img" aria-label="accuracy by pair distance">`;

  if (curve.length === 0) {
    return (
      open +
      `<text class="chart-empty" x="${width / 2}" y="${height / 2}" ` +
      `text-anchor="middle">no measured levels</text></svg>`
    );
  }

  const sorted = [...curve].sort((a, b) => a.d - b.d);
  const dLo = sorted[0].d / 1.25;
  const dHi = sorted[sorted.length - 1].d * 1.25;
  const x = logScale([dLo, dHi], [innerLeft, innerRight]);
  const y = linearScale([0, 1], [innerBottom, innerTop]);

  const parts: string[] = [open];

  // frame and reference lines
  parts.push(
    `<rect class="chart-frame" x="${px(innerLeft)}" y="${px(innerTop)}" ` +
      `width="${px(innerRight - innerLeft)}" height="${px(innerBottom - innerTop)}"/>`,
  );
  for (const [value, cls] of [
    [1 / 3, "chart-chance"],
    [2 / 3, "chart-threshold"],
  ] as const) {
    parts.push(
      `<line class="${cls}" x1="${px(innerLeft)}" x2="${px(innerRight)}" ` +
        `y1="${px(y(value))}" y2="${px(y(value))}"/>`,
    );
  }

  // axes
  for (const v of logTicks(dLo, dHi)) {
    parts.push(
      `<line class="chart-tick" x1="${px(x(v))}" x2="${px(x(v))}" ` +
        `y1="${px(innerBottom)}" y2="${px(innerBottom + 5)}"/>` +
        `<text class="chart-tick-label" x="${px(x(v))}" y="${px(innerBottom + 18)}" ` +
        `text-anchor="middle">${tickLabel(v)}</text>`,
    );
  }
  for (const v of [0, 0.25, 0.5, 0.75, 1]) {
    parts.push(
      `<line class="chart-tick" x1="${px(innerLeft - 5)}" x2="${px(innerLeft)}" ` +
        `y1="${px(y(v))}" y2="${px(y(v))}"/>` +
        `<text class="chart-tick-label" x="${px(innerLeft - 9)}" y="${px(y(v) + 4)}" ` +
        `text-anchor="end">${v}</text>`,
    );
  }
  parts.push(
    `<text class="chart-axis-label" x="${px((innerLeft + innerRight) / 2)}" ` +
      `y="${px(height - 6)}" text-anchor="middle">pair distance</text>`,
  );

  // confidence band, then the curve on top of it
  parts.push(`<polygon class="chart-band" points="${bandPoints(sorted, x, y)}"/>`);
  parts.push(
    `<path class="chart-line" d="${linePath(
      sorted.map((p) => [x(p.d), y(p.accuracy)]),
    )}"/>`,
  );
  for (const p of sorted) {
    parts.push(
      `<circle class="chart-point" cx="${px(x(p.d))}" cy="${px(y(p.accuracy))}" r="3">` +
        `<title>level ${p.t}: d=${p.d.toFixed(3)}, ${p.n_correct}/${p.n} correct</title>` +
        `</circle>`,
    );
  }

  parts.push("</svg>");
  return parts.join("");
}
