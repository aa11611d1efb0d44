"""HTTP facade over the session engine and archive registry.

The service owns a data directory: uploaded archives live under
``glyphs/`` keyed by content digest, sessions under ``sessions/`` in the
store's layout.  Sessions survive restarts; the engine replays persisted
records to resume exactly where it stopped.  All comparison images are
served from the uploaded archives, so what a session shows is always a
stored sample, never a fresh render.
"""

from __future__ import annotations

import logging
import threading
from datetime import datetime
from pathlib import Path
from typing import Callable, Literal

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .design import GlyphError

from .exchange import ExchangeError, GlyphArchive, archive_digest, import_archive
from .metrics import export_curve, score_to_json_dict
from .session import SessionEngine, StaleTrialError, TrialView
from .staircase import Answer, StaircaseConfig
from .store import SessionStateError, Store, UnknownSessionError

logger = logging.getLogger(__name__)

ARCHIVE_SUFFIX = ".mglyph"


class ConfigPatch(BaseModel):
    """Optional overrides of the staircase defaults."""

    d0: float | None = None
    gamma: float | None = None
    p_equal: float | None = None
    decrement: int | None = None
    t_max: int | None = None
    trials_per_glyph: int | None = None
    rng_seed: int | None = None


class CreateSessionRequest(BaseModel):
    glyph_ids: list[str] = Field(min_length=1)
    config: ConfigPatch | None = None


class AnswerRequest(BaseModel):
    trial_token: str
    answer: Literal["left", "equal", "right"]
    response_ms: int | None = Field(default=None, ge=0)


class ServiceState:
    """Mutable service internals, shared across requests."""

    def __init__(self, data_dir: Path, seed: int, clock: Callable[[], datetime] | None):
        self.data_dir = data_dir
        self.glyph_dir = data_dir / "glyphs"
        self.glyph_dir.mkdir(parents=True, exist_ok=True)
        self.store = Store(data_dir)
        self.seed = seed
        self.clock = clock
        self.registry: dict[str, GlyphArchive] = {}
        self.engines: dict[str, SessionEngine] = {}
        self.lock = threading.RLock()
        self.session_counter = len(self.store.sessions())
        for path in sorted(self.glyph_dir.glob(f"*{ARCHIVE_SUFFIX}")):
            try:
                self.registry[path.stem] = import_archive(path)
            except ExchangeError as exc:
                logger.warning("skipping unreadable archive %s: %s", path.name, exc)

    def add_archive(self, data: bytes) -> str:
        digest = archive_digest(data)
        with self.lock:
            if digest not in self.registry:
                archive = import_archive(data)  # raises ExchangeError when invalid
                (self.glyph_dir / f"{digest}{ARCHIVE_SUFFIX}").write_bytes(data)
                self.registry[digest] = archive
        return digest

    def next_session_id(self) -> str:
        self.session_counter += 1
        return f"s{self.session_counter:06d}"

    def engine(self, session_id: str) -> SessionEngine:
        with self.lock:
            engine = self.engines.get(session_id)
            if engine is None:
                meta = self.store.session_meta(session_id)  # raises UnknownSessionError
                engine = SessionEngine.restore(
                    self.store, self.registry, meta.session_id, clock=self.clock
                )
                self.engines[session_id] = engine
            return engine


def _glyph_summary(gid: str, archive: GlyphArchive) -> dict:
    return {
        "glyph_id": gid,
        "name": archive.manifest.name,
        "short_name": archive.manifest.short_name,
        "samples": archive.sample_count(),
        "resolution": archive.resolution,
    }


def _view_payload(session_id: str, view: TrialView) -> dict:
    return {
        "finished": False,
        "trial_token": view.token,
        "glyph_id": view.glyph_id,
        "left_image_url": f"/glyphs/{view.glyph_id}/sample/{view.left_index}.png",
        "right_image_url": f"/glyphs/{view.glyph_id}/sample/{view.right_index}.png",
        "progress": {"answered": view.answered, "total": view.total},
    }


def create_app(
    data_dir,
    *,
    seed: int = 0,
    static_dir=None,
    clock: Callable[[], datetime] | None = None,
) -> FastAPI:
    """Build the service app rooted at the given data directory."""
    state = ServiceState(Path(data_dir), seed, clock)
    app = FastAPI(title="glyphlab", version="0.1.0")
    app.state.glyphlab = state

    @app.exception_handler(ExchangeError)
    async def _bad_archive(_req: Request, exc: ExchangeError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/glyphs")
    def list_glyphs() -> list[dict]:
        return [_glyph_summary(gid, a) for gid, a in sorted(state.registry.items())]

    @app.post("/glyphs", status_code=201)
    async def upload_glyph(request: Request) -> dict:
        data = await request.body()
        if not data:
            raise HTTPException(status_code=400, detail="empty upload")
        digest = state.add_archive(data)
        return {"glyph_id": digest, **_glyph_summary(digest, state.registry[digest])}

    @app.get("/glyphs/{glyph_id}")
    def glyph_info(glyph_id: str) -> dict:
        archive = state.registry.get(glyph_id)
        if archive is None:
            raise HTTPException(status_code=404, detail=f"unknown glyph {glyph_id!r}")
        info = _glyph_summary(glyph_id, archive)
        info["xs"] = list(archive.xs)
        return info

    @app.get("/glyphs/{glyph_id}/sample/{index}.png")
    def glyph_sample(glyph_id: str, index: int) -> Response:
        archive = state.registry.get(glyph_id)
        if archive is None:
            raise HTTPException(status_code=404, detail=f"unknown glyph {glyph_id!r}")
        if not (0 <= index < archive.sample_count()):
            raise HTTPException(status_code=404, detail=f"sample index {index} out of range")
        return Response(
            content=archive.image_bytes(index),
            media_type="image/png",
            headers={"Cache-Control": "public, max-age=31536000, immutable"},
        )

    @app.get("/sessions")
    def list_sessions() -> list[dict]:
        out = []
        for meta in state.store.sessions():
            out.append(
                {
                    "session_id": meta.session_id,
                    "status": meta.status,
                    "glyph_ids": list(meta.glyph_ids),
                    "created_at": meta.created_at,
                }
            )
        return out

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        unknown = [gid for gid in req.glyph_ids if gid not in state.registry]
        if unknown:
            raise HTTPException(status_code=404, detail=f"unknown glyphs: {unknown}")
        with state.lock:
            session_id = state.next_session_id()
            overrides = {
                k: v
                for k, v in (req.config.model_dump() if req.config else {}).items()
                if v is not None
            }
            if "rng_seed" not in overrides:
                overrides["rng_seed"] = state.seed + state.session_counter
            try:
                config = StaircaseConfig(**overrides)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            targets = {gid: state.registry[gid] for gid in req.glyph_ids}
            engine = SessionEngine(
                session_id, targets, config, state.store, clock=state.clock
            )
            state.engines[session_id] = engine
        answered, total = engine.progress()
        return {
            "session_id": session_id,
            "glyph_ids": sorted(targets),
            "config": {
                "d0": config.d0,
                "gamma": config.gamma,
                "p_equal": config.p_equal,
                "decrement": config.decrement,
                "t_max": config.t_max,
                "trials_per_glyph": config.trials_per_glyph,
                "rng_seed": config.rng_seed,
            },
            "total_trials": total,
        }

    def _engine_or_404(session_id: str) -> SessionEngine:
        try:
            return state.engine(session_id)
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except GlyphError as exc:
            # session exists but cannot be brought back (e.g. archive gone)
            raise HTTPException(status_code=409, detail=str(exc)) from exc

    @app.get("/sessions/{session_id}/next")
    def next_trial_view(session_id: str) -> dict:
        engine = _engine_or_404(session_id)
        with state.lock:
            view = engine.next_view()
        if view is None:
            return {
                "finished": True,
                "results_url": f"/sessions/{session_id}/results",
            }
        return _view_payload(session_id, view)

    @app.post("/sessions/{session_id}/answer")
    def submit_answer(session_id: str, req: AnswerRequest) -> dict:
        engine = _engine_or_404(session_id)
        try:
            with state.lock:
                record, correct = engine.submit(
                    req.trial_token, Answer.from_wire(req.answer), req.response_ms
                )
        except (StaleTrialError, SessionStateError) as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {
            "correct": correct,
            "sequence": record.sequence,
            "finished": engine.finished,
        }

    @app.get("/sessions/{session_id}/results")
    def session_results(session_id: str) -> dict:
        engine = _engine_or_404(session_id)
        meta = state.store.session_meta(session_id)
        with state.lock:
            scores = engine.results()
        return {
            "session_id": session_id,
            "status": meta.status,
            "glyphs": {gid: score_to_json_dict(s) for gid, s in scores.items()},
        }

    @app.get("/sessions/{session_id}/results/{glyph_id}.{fmt}")
    def download_results(session_id: str, glyph_id: str, fmt: str) -> Response:
        if fmt not in ("csv", "json"):
            raise HTTPException(status_code=404, detail="format must be csv or json")
        engine = _engine_or_404(session_id)
        with state.lock:
            scores = engine.results()
        if glyph_id not in scores:
            raise HTTPException(status_code=404, detail=f"unknown glyph {glyph_id!r}")
        body = export_curve(scores[glyph_id], fmt=fmt)
        media = "text/csv" if fmt == "csv" else "application/json"
        return Response(
            content=body,
            media_type=media,
            headers={
                "Content-Disposition": f'attachment; filename="{session_id}-{glyph_id}.{fmt}"'
            },
        )

    if static_dir is not None:
        static_path = Path(static_dir)
        if static_path.is_dir():
            app.mount("/", StaticFiles(directory=static_path, html=True), name="static")
        else:
            logger.warning(
                "static directory %s does not exist; serving API only", static_path
            )

    return app
