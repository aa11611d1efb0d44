/** Screen flow: pick or upload glyphs, run the comparison loop, read
 * the scores. All service access goes through the typed client; this
 * module is only DOM wiring.
 */

import { ApiError, Client } from "./api.js";
import { accuracyChart } from "./chart.js";
import { scoreHeadline, trialsInCurve } from "./format.js";
import { SessionDriver, answerForKey } from "./driver.js";
import type { GlyphSummary, SessionResults, TrialPending } from "./types.js";

const client = new Client();
const app = document.getElementById("app") as HTMLElement;

let driver: SessionDriver | null = null;

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

function setStatus(message: string, isError = false): void {
  const bar = document.getElementById("status");
  if (!bar) return;
  bar.textContent = message;
  bar.className = isError ? "status error" : "status";
}

async function call<T>(work: Promise<T>): Promise<T | null> {
  try {
    return await work;
  } catch (err) {
    const msg = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
    setStatus(msg, true);
    return null;
  }
}

// ---------------------------------------------------------------------------
// setup screen
// ---------------------------------------------------------------------------

function glyphRow(g: GlyphSummary): string {
  return (
    `<label class="glyph-row">` +
    `<input type="checkbox" name="glyph" value="${esc(g.glyph_id)}">` +
    `<span class="glyph-name">${esc(g.name)}</span>` +
    `<span class="glyph-meta">${g.samples} samples at ${g.resolution}px</span>` +
    `<code class="glyph-id">${esc(g.glyph_id)}</code>` +
    `</label>`
  );
}

async function showSetup(): Promise<void> {
  driver = null;
  const glyphs = (await call(client.listGlyphs())) ?? [];
  const sessions = (await call(client.listSessions())) ?? [];

  const sessionRows = sessions
    .slice()
    .reverse()
    .map(
      (s) =>
        `<li><button class="link" data-session="${esc(s.session_id)}" ` +
        `data-status="${s.status}">${esc(s.session_id)}</button> ` +
        `<span class="glyph-meta">${s.status}, ${s.glyph_ids.length} glyph(s)</span></li>`,
    )
    .join("");

  app.innerHTML = `
    <section class="card">
      <h2>Glyphs</h2>
      <form id="upload-form">
        <input type="file" id="archive-file" accept=".mglyph">
        <button type="submit">Upload archive</button>
      </form>
      <div id="glyph-list">${glyphs.map(glyphRow).join("") || "<p>none uploaded yet</p>"}</div>
    </section>
    <section class="card">
      <h2>New session</h2>
      <label>trials per glyph
        <input type="number" id="trials" value="177" min="1" max="2000">
      </label>
      <button id="start" ${glyphs.length === 0 ? "disabled" : ""}>Start session</button>
    </section>
    <section class="card">
      <h2>Existing sessions</h2>
      <ul class="session-list">${sessionRows || "<li>none</li>"}</ul>
    </section>`;

  const form = document.getElementById("upload-form") as HTMLFormElement;
  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const input = document.getElementById("archive-file") as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) {
      setStatus("choose a .mglyph file first", true);
      return;
    }
    const uploaded = await call(
      file.arrayBuffer().then((buf) => client.uploadGlyph(buf)),
    );
    if (uploaded) {
      setStatus(`uploaded ${uploaded.name} as ${uploaded.glyph_id}`);
      await showSetup();
    }
  });

  (document.getElementById("start") as HTMLButtonElement).addEventListener(
    "click",
    async () => {
      const picked = [
        ...app.querySelectorAll<HTMLInputElement>("input[name=glyph]:checked"),
      ].map((el) => el.value);
      if (picked.length === 0) {
        setStatus("pick at least one glyph", true);
        return;
      }
      const trials = Number(
        (document.getElementById("trials") as HTMLInputElement).value,
      );
      const created = await call(
        client.createSession(picked, { trials_per_glyph: trials }),
      );
      if (created) {
        setStatus(`session ${created.session_id}: ${created.total_trials} trials`);
        await runSession(created.session_id);
      }
    },
  );

  for (const btn of app.querySelectorAll<HTMLButtonElement>("button[data-session]")) {
    btn.addEventListener("click", () => {
      const id = btn.dataset.session as string;
      if (btn.dataset.status === "active") void runSession(id);
      else void showResults(id);
    });
  }
}

// ---------------------------------------------------------------------------
// comparison screen
// ---------------------------------------------------------------------------

function renderTrial(view: TrialPending): void {
  const { answered, total } = view.progress;
  app.innerHTML = `
    <section class="card trial">
      <div class="progress-track"><div class="progress-fill" style="width:${
        total ? (100 * answered) / total : 0
      }%"></div></div>
      <p class="progress-text">trial ${answered + 1} of ${total}</p>
      <div class="pair">
        <img src="${esc(view.left_image_url)}" alt="left glyph">
        <img src="${esc(view.right_image_url)}" alt="right glyph">
      </div>
      <p class="prompt">Which side shows the larger value?</p>
      <div class="answers">
        <button data-answer="left">&#8592; left</button>
        <button data-answer="equal">&#8595; equal</button>
        <button data-answer="right">right &#8594;</button>
      </div>
      <p class="hint">arrow keys work too</p>
    </section>`;

  for (const btn of app.querySelectorAll<HTMLButtonElement>("button[data-answer]")) {
    btn.addEventListener("click", () => {
      void submit(btn.dataset.answer as "left" | "equal" | "right");
    });
  }
}

async function submit(value: "left" | "equal" | "right"): Promise<void> {
  if (!driver) return;
  const result = await call(driver.answer(value));
  if (result === null) return;
  if (result === "stale") setStatus("trial changed elsewhere, showing the current one");
  if (result === "finished") {
    const id = driver.sessionId;
    driver = null;
    await showResults(id);
    return;
  }
  const view = driver.current;
  if (view) renderTrial(view);
}

async function runSession(sessionId: string): Promise<void> {
  driver = new SessionDriver(client, sessionId);
  let view: TrialPending | null;
  try {
    view = await driver.load();
  } catch (err) {
    const msg = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
    setStatus(msg, true);
    driver = null;
    return;
  }
  if (view === null) {
    await showResults(sessionId);
    return;
  }
  setStatus(`session ${sessionId}`);
  renderTrial(view);
}

document.addEventListener("keydown", (ev) => {
  if (!driver || ev.repeat) return;
  const value = answerForKey(ev.key);
  if (value) {
    ev.preventDefault();
    void submit(value);
  }
});

// ---------------------------------------------------------------------------
// results screen
// ---------------------------------------------------------------------------

function resultsCard(sessionId: string, results: SessionResults): string {
  const blocks = Object.entries(results.glyphs).map(([gid, score]) => {
    return `
      <section class="card">
        <h2><code>${esc(gid)}</code></h2>
        <p class="headline">${esc(scoreHeadline(score))}</p>
        <p class="glyph-meta">${trialsInCurve(score)} unequal trials over ${
          score.curve.length
        } levels</p>
        ${accuracyChart(score.curve)}
        <p class="downloads">
          <a href="${client.downloadUrl(sessionId, gid, "csv")}" download>curve.csv</a>
          <a href="${client.downloadUrl(sessionId, gid, "json")}" download>score.json</a>
        </p>
      </section>`;
  });
  return blocks.join("");
}

async function showResults(sessionId: string): Promise<void> {
  driver = null;
  const results = await call(client.results(sessionId));
  if (!results) return;
  setStatus(`results for ${sessionId} (${results.status})`);
  app.innerHTML =
    resultsCard(sessionId, results) +
    `<section class="card"><button id="back">Back to setup</button></section>`;
  (document.getElementById("back") as HTMLButtonElement).addEventListener(
    "click",
    () => void showSetup(),
  );
}

void showSetup();
