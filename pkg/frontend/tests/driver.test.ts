import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { SessionDriver, answerForKey } from "../src/driver.js";
import type {
  AnswerOutcome,
  AnswerValue,
  TrialPending,
  TrialResponse,
} from "../src/types.js";

const view = (token: string, answered: number, total = 5): TrialPending => ({
  finished: false,
  trial_token: token,
  glyph_id: "g1",
  left_image_url: `/glyphs/g1/sample/${answered}.png`,
  right_image_url: `/glyphs/g1/sample/${answered + 1}.png`,
  progress: { answered, total },
});

const done: TrialResponse = { finished: true, results_url: "/sessions/s1/results" };

/** Scripted stand-in for the HTTP client. */
class FakeService {
  submitted: Array<{ token: string; answer: AnswerValue; ms?: number }> = [];
  private cursor = 0;

  constructor(
    private views: TrialResponse[],
    private outcomes: Array<AnswerOutcome | ApiError> = [],
  ) {}

  async nextTrial(): Promise<TrialResponse> {
    const v = this.views[Math.min(this.cursor, this.views.length - 1)];
    this.cursor += 1;
    return v;
  }

  async submitAnswer(
    _sid: string,
    token: string,
    answer: AnswerValue,
    ms?: number,
  ): Promise<AnswerOutcome> {
    this.submitted.push({ token, answer, ms });
    const out = this.outcomes.shift();
    if (out === undefined) return { correct: true, sequence: 0, finished: false };
    if (out instanceof ApiError) throw out;
    return out;
  }
}

describe("answerForKey", () => {
  it("maps the three arrows and nothing else", () => {
    expect(answerForKey("ArrowLeft")).toBe("left");
    expect(answerForKey("ArrowDown")).toBe("equal");
    expect(answerForKey("ArrowRight")).toBe("right");
    expect(answerForKey("ArrowUp")).toBeNull();
    expect(answerForKey("Enter")).toBeNull();
    expect(answerForKey("a")).toBeNull();
  });
});

describe("SessionDriver", () => {
  it("loads the pending trial and exposes it", async () => {
    const svc = new FakeService([view("t0", 0)]);
    const driver = new SessionDriver(svc, "s1");
    const v = await driver.load();
    expect(v?.trial_token).toBe("t0");
    expect(driver.current).toBe(v);
  });

  it("submits with the shown token and advances", async () => {
    const svc = new FakeService([view("t0", 0), view("t1", 1)]);
    const driver = new SessionDriver(svc, "s1", () => 0);
    await driver.load();
    const result = await driver.answer("right");
    expect(result).toBe("accepted");
    expect(svc.submitted.map((s) => s.token)).toEqual(["t0"]);
    expect(driver.current?.trial_token).toBe("t1");
  });

  it("measures response time with the injected clock", async () => {
    let t = 1000;
    const svc = new FakeService([view("t0", 0), view("t1", 1)]);
    const driver = new SessionDriver(svc, "s1", () => t);
    await driver.load();
    t = 1873;
    await driver.answer("left");
    expect(svc.submitted[0].ms).toBe(873);
  });

  it("recovers from a stale token by refetching", async () => {
    const svc = new FakeService(
      [view("old", 2), view("fresh", 2)],
      [new ApiError(409, "stale trial token")],
    );
    const driver = new SessionDriver(svc, "s1");
    await driver.load();
    const result = await driver.answer("equal");
    expect(result).toBe("stale");
    expect(driver.current?.trial_token).toBe("fresh");
  });

  it("treats a stale token on an exhausted session as finished", async () => {
    const svc = new FakeService(
      [view("old", 4), done],
      [new ApiError(409, "stale trial token")],
    );
    const driver = new SessionDriver(svc, "s1");
    await driver.load();
    expect(await driver.answer("left")).toBe("finished");
    expect(driver.current).toBeNull();
  });

  it("reports the final answer as finished without refetching", async () => {
    const svc = new FakeService(
      [view("t4", 4)],
      [{ correct: true, sequence: 4, finished: true }],
    );
    const driver = new SessionDriver(svc, "s1");
    await driver.load();
    expect(await driver.answer("left")).toBe("finished");
    expect(driver.current).toBeNull();
    expect(svc.submitted).toHaveLength(1);
  });

  it("propagates non-409 failures", async () => {
    const svc = new FakeService([view("t0", 0)], [new ApiError(500, "boom")]);
    const driver = new SessionDriver(svc, "s1");
    await driver.load();
    await expect(driver.answer("left")).rejects.toMatchObject({ status: 500 });
  });

  it("returns finished for a session that is already over", async () => {
    const svc = new FakeService([done]);
    const driver = new SessionDriver(svc, "s1");
    expect(await driver.load()).toBeNull();
    expect(await driver.answer("left")).toBe("finished");
    expect(svc.submitted).toHaveLength(0);
  });

  it("clamps negative elapsed times to zero", async () => {
    let t = 500;
    const svc = new FakeService([view("t0", 0), view("t1", 1)]);
    const driver = new SessionDriver(svc, "s1", () => t);
    await driver.load();
    t = 400; // clock went backwards
    await driver.answer("right");
    expect(svc.submitted[0].ms).toBe(0);
  });
});
