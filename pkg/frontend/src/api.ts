/** Thin typed client for the comparison service.
 *
 * Every method maps to one endpoint and returns the parsed JSON body.
 * Non-2xx responses become ApiError with the server's detail string, so
 * callers can branch on status (409 means a stale trial token, 400 a
 * rejected archive).
 */

import type {
  AnswerOutcome,
  AnswerValue,
  GlyphDetail,
  GlyphSummary,
  SessionCreated,
  SessionResults,
  SessionSummary,
  StaircaseOverrides,
  TrialResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Client {
  private readonly fetchImpl: FetchLike;

  constructor(private readonly base = "", fetchImpl?: FetchLike) {
    this.fetchImpl = fetchImpl ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(this.base + path, init);
    if (!res.ok) {
      let detail = `HTTP ${res.status}`;
      try {
        const body = await res.json();
        if (typeof body?.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(res.status, detail);
    }
    return res.json() as Promise<T>;
  }

  listGlyphs(): Promise<GlyphSummary[]> {
    return this.request("/glyphs");
  }

  /** Upload a .mglyph archive as raw bytes. Idempotent by content. */
  uploadGlyph(data: ArrayBuffer | Uint8Array): Promise<GlyphSummary> {
    return this.request("/glyphs", {
      method: "POST",
      headers: { "Content-Type": "application/octet-stream" },
      body: data as BodyInit,
    });
  }

  glyphInfo(glyphId: string): Promise<GlyphDetail> {
    return this.request(`/glyphs/${glyphId}`);
  }

  sampleUrl(glyphId: string, index: number): string {
    return `${this.base}/glyphs/${glyphId}/sample/${index}.png`;
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.request("/sessions");
  }

  createSession(
    glyphIds: string[],
    config?: StaircaseOverrides,
  ): Promise<SessionCreated> {
    const body: Record<string, unknown> = { glyph_ids: glyphIds };
    if (config !== undefined) body.config = config;
    return this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  nextTrial(sessionId: string): Promise<TrialResponse> {
    return this.request(`/sessions/${sessionId}/next`);
  }

  submitAnswer(
    sessionId: string,
    token: string,
    answer: AnswerValue,
    responseMs?: number,
  ): Promise<AnswerOutcome> {
    const body: Record<string, unknown> = { trial_token: token, answer };
    if (responseMs !== undefined) body.response_ms = responseMs;
    return this.request(`/sessions/${sessionId}/answer`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  results(sessionId: string): Promise<SessionResults> {
    return this.request(`/sessions/${sessionId}/results`);
  }

  downloadUrl(sessionId: string, glyphId: string, fmt: "csv" | "json"): string {
    return `${this.base}/sessions/${sessionId}/results/${glyphId}.${fmt}`;
  }
}
