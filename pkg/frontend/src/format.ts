/** Number formatting for the results screen. */

import type { GlyphScore } from "./types.js";

export const fmt = (value: number, digits = 2): string => value.toFixed(digits);

export const pct = (value: number): string => `${(100 * value).toFixed(0)}%`;

/** One-line summary of a score: resolution first, the rest in support. */
export function scoreHeadline(score: GlyphScore): string {
  const crossing =
    score.jnd_crossing === null ? "n/a" : fmt(score.jnd_crossing, 2);
  return (
    `R = ${fmt(score.resolution)} steps, ` +
    `D = ${fmt(score.jnd_distance)}, ` +
    `AUC = ${fmt(score.auc, 3)} bits, ` +
    `2/3 crossing at d = ${crossing}`
  );
}

export function trialsInCurve(score: GlyphScore): number {
  return score.curve.reduce((sum, p) => sum + p.n, 0);
}
