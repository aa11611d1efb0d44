/** Wire types mirroring the JSON the comparison service emits. */

export interface GlyphSummary {
  glyph_id: string;
  name: string;
  short_name: string;
  samples: number;
  resolution: number;
}

export interface GlyphDetail extends GlyphSummary {
  /** Parameter values of the stored samples, ascending. */
  xs: number[];
}

export interface SessionSummary {
  session_id: string;
  status: "active" | "finished" | "abandoned";
  glyph_ids: string[];
  created_at: string;
}

export interface StaircaseOverrides {
  d0?: number;
  gamma?: number;
  p_equal?: number;
  decrement?: number;
  t_max?: number;
  trials_per_glyph?: number;
  rng_seed?: number;
}

export interface SessionCreated {
  session_id: string;
  glyph_ids: string[];
  config: Required<StaircaseOverrides>;
  total_trials: number;
}

export interface TrialPending {
  finished: false;
  trial_token: string;
  glyph_id: string;
  left_image_url: string;
  right_image_url: string;
  progress: { answered: number; total: number };
}

export interface TrialFinished {
  finished: true;
  results_url: string;
}

export type TrialResponse = TrialPending | TrialFinished;

export type AnswerValue = "left" | "equal" | "right";

export interface AnswerOutcome {
  correct: boolean;
  sequence: number;
  finished: boolean;
}

export interface CurvePoint {
  t: number;
  d: number;
  n: number;
  n_correct: number;
  accuracy: number;
  ci_low: number;
  ci_high: number;
}

export interface GlyphScore {
  glyph_id: string;
  auc: number;
  resolution: number;
  jnd_distance: number;
  jnd_crossing: number | null;
  curve: CurvePoint[];
}

export interface SessionResults {
  session_id: string;
  status: string;
  glyphs: Record<string, GlyphScore>;
}
