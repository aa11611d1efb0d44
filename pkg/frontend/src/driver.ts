/** Runs one comparison session against the service.
 *
 * The driver keeps exactly one pending trial in hand. Submitting an
 * answer for a token the server no longer recognizes (a 409, e.g. after
 * a restart elsewhere picked up the session) is not fatal: the pending
 * view is refetched and the run continues. Response times come from an
 * injectable clock so they are testable.
 */

import { ApiError, Client } from "./api.js";
import type { AnswerValue, TrialPending } from "./types.js";

export const answerForKey = (key: string): AnswerValue | null => {
  switch (key) {
    case "ArrowLeft":
      return "left";
    case "ArrowDown":
      return "equal";
    case "ArrowRight":
      return "right";
    default:
      return null;
  }
};

export type SubmitResult = "accepted" | "stale" | "finished";

export class SessionDriver {
  private pending: TrialPending | null = null;
  private shownAt = 0;
  private busy = false;

  constructor(
    private readonly client: Pick<Client, "nextTrial" | "submitAnswer">,
    readonly sessionId: string,
    private readonly now: () => number = () => performance.now(),
  ) {}

  get current(): TrialPending | null {
    return this.pending;
  }

  get finishedLoaded(): boolean {
    return this.pending === null && this.shownAt < 0;
  }

  /** Fetch the pending trial. Resolves to null when the session is done. */
  async load(): Promise<TrialPending | null> {
    const view = await this.client.nextTrial(this.sessionId);
    if (view.finished) {
      this.pending = null;
      this.shownAt = -1;
      return null;
    }
    this.pending = view;
    this.shownAt = this.now();
    return view;
  }

  /**
   * Submit an answer for the trial in hand, then advance to the next
   * one. Returns how the server took it; "stale" means the answer was
   * dropped and a fresh trial is now loaded.
   */
  async answer(value: AnswerValue): Promise<SubmitResult> {
    if (this.pending === null || this.busy) return "finished";
    this.busy = true;
    const token = this.pending.trial_token;
    const elapsed = Math.max(0, Math.round(this.now() - this.shownAt));
    try {
      const outcome = await this.client.submitAnswer(
        this.sessionId,
        token,
        value,
        elapsed,
      );
      if (outcome.finished) {
        this.pending = null;
        this.shownAt = -1;
        return "finished";
      }
      await this.load();
      return "accepted";
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        const view = await this.load();
        return view === null ? "finished" : "stale";
      }
      throw err;
    } finally {
      this.busy = false;
    }
  }
}
