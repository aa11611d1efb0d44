"""Append-only session store backed by JSON-lines files.

Layout under the data directory:

    sessions/<session-id>/meta.json      session metadata and status
    sessions/<session-id>/records.jsonl  one answered trial per line

Records are flushed as they arrive; a torn final line (crash mid-write) is
ignored on load, so readers always see a consistent prefix of the history.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterator

from .design import GlyphError
from .exchange import format_timestamp  # shared wire timestamp format
from .staircase import Answer, StaircaseConfig

__all__ = [
    "TrialRecord",
    "SessionMeta",
    "Store",
    "StoreError",
    "UnknownSessionError",
    "SessionExistsError",
    "SessionStateError",
    "StoreCorruptError",
    "format_timestamp",
]

SESSION_STATUSES = ("active", "finished", "abandoned")
_SESSION_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class StoreError(GlyphError):
    """Base class for store failures."""


class UnknownSessionError(StoreError):
    pass


class SessionExistsError(StoreError):
    pass


class SessionStateError(StoreError):
    """Operation not allowed in the session's current status."""


class StoreCorruptError(StoreError):
    """On-disk data is damaged beyond the tolerated torn final line."""


@dataclass(frozen=True)
class TrialRecord:
    """One answered trial, exactly as presented and judged."""

    session_id: str
    glyph_id: str
    sequence: int
    t: int
    d: float
    c: float
    x1: float
    x2: float
    is_equal: bool
    presented_at: str
    answer: Answer
    correct: bool
    response_ms: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "session": self.session_id,
            "glyph": self.glyph_id,
            "seq": self.sequence,
            "t": self.t,
            "d": self.d,
            "c": self.c,
            "x1": self.x1,
            "x2": self.x2,
            "equal": self.is_equal,
            "presented_at": self.presented_at,
            "answer": self.answer.to_wire(),
            "correct": self.correct,
            "response_ms": self.response_ms,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TrialRecord":
        return cls(
            session_id=data["session"],
            glyph_id=data["glyph"],
            sequence=int(data["seq"]),
            t=int(data["t"]),
            d=float(data["d"]),
            c=float(data["c"]),
            x1=float(data["x1"]),
            x2=float(data["x2"]),
            is_equal=bool(data["equal"]),
            presented_at=data["presented_at"],
            answer=Answer.from_wire(data["answer"]),
            correct=bool(data["correct"]),
            response_ms=None if data.get("response_ms") is None else int(data["response_ms"]),
        )


@dataclass(frozen=True)
class SessionMeta:
    """Identity and configuration of one session."""

    session_id: str
    created_at: str
    glyph_ids: tuple[str, ...]
    config: StaircaseConfig
    status: str = "active"

    def to_json_dict(self) -> dict:
        return {
            "session": self.session_id,
            "created_at": self.created_at,
            "glyphs": list(self.glyph_ids),
            "config": {
                "d0": self.config.d0,
                "gamma": self.config.gamma,
                "p_equal": self.config.p_equal,
                "decrement": self.config.decrement,
                "t_max": self.config.t_max,
                "trials_per_glyph": self.config.trials_per_glyph,
                "rng_seed": self.config.rng_seed,
            },
            "status": self.status,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SessionMeta":
        cfg = data["config"]
        return cls(
            session_id=data["session"],
            created_at=data["created_at"],
            glyph_ids=tuple(data["glyphs"]),
            config=StaircaseConfig(
                d0=float(cfg["d0"]),
                gamma=float(cfg["gamma"]),
                p_equal=float(cfg["p_equal"]),
                decrement=int(cfg["decrement"]),
                t_max=int(cfg["t_max"]),
                trials_per_glyph=int(cfg["trials_per_glyph"]),
                rng_seed=int(cfg["rng_seed"]),
            ),
            status=data.get("status", "active"),
        )


def _expected_correct(record: TrialRecord) -> bool:
    if record.is_equal:
        return record.answer == Answer.EQUAL
    if record.x1 > record.x2:
        return record.answer == Answer.LEFT_GREATER
    return record.answer == Answer.RIGHT_GREATER


class Store:
    """Filesystem-backed append-only trial store."""

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.sessions_dir = self.data_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._handles: dict[str, IO[str]] = {}
        self._last_sequence: dict[str, int] = {}

    # -- sessions ------------------------------------------------------

    def _session_dir(self, session_id: str) -> Path:
        if not _SESSION_ID_RE.match(session_id):
            raise ValueError(f"session id must match [A-Za-z0-9_-]+, got {session_id!r}")
        return self.sessions_dir / session_id

    def create_session(self, meta: SessionMeta) -> None:
        path = self._session_dir(meta.session_id)
        if path.exists():
            raise SessionExistsError(f"session {meta.session_id!r} already exists")
        path.mkdir(parents=True)
        self._write_meta(path, meta)
        self._last_sequence[meta.session_id] = 0

    def _write_meta(self, path: Path, meta: SessionMeta) -> None:
        tmp = path / "meta.json.tmp"
        tmp.write_text(json.dumps(meta.to_json_dict(), indent=1) + "\n")
        os.replace(tmp, path / "meta.json")

    def session_meta(self, session_id: str) -> SessionMeta:
        path = self._session_dir(session_id) / "meta.json"
        if not path.exists():
            raise UnknownSessionError(f"no session {session_id!r}")
        try:
            return SessionMeta.from_json_dict(json.loads(path.read_text()))
        except (json.JSONDecodeError, KeyError) as exc:
            raise StoreCorruptError(f"bad meta.json for {session_id!r}: {exc}") from exc

    def set_status(self, session_id: str, status: str) -> SessionMeta:
        if status not in SESSION_STATUSES:
            raise ValueError(f"status must be one of {SESSION_STATUSES}, got {status!r}")
        meta = self.session_meta(session_id)
        if meta.status == status:
            return meta
        if meta.status != "active":
            raise SessionStateError(
                f"session {session_id!r} is {meta.status}; status is final"
            )
        updated = replace(meta, status=status)
        self._write_meta(self._session_dir(session_id), updated)
        if status != "active":
            self._close_handle(session_id, durable=True)
        return updated

    def sessions(self) -> tuple[SessionMeta, ...]:
        metas = []
        for path in sorted(self.sessions_dir.iterdir() if self.sessions_dir.exists() else []):
            if (path / "meta.json").exists():
                metas.append(self.session_meta(path.name))
        return tuple(metas)

    # -- records -------------------------------------------------------

    def _records_path(self, session_id: str) -> Path:
        return self._session_dir(session_id) / "records.jsonl"

    def _load_last_sequence(self, session_id: str) -> int:
        last = 0
        for record in self.iter_records(session_id):
            last = record.sequence
        return last

    def append(self, record: TrialRecord) -> TrialRecord:
        meta = self.session_meta(record.session_id)
        if meta.status != "active":
            raise SessionStateError(
                f"cannot append to {meta.status} session {record.session_id!r}"
            )
        if record.glyph_id not in meta.glyph_ids:
            raise ValueError(
                f"glyph {record.glyph_id!r} is not part of session {record.session_id!r}"
            )
        sid = record.session_id
        if sid not in self._last_sequence:
            self._last_sequence[sid] = self._load_last_sequence(sid)
        if record.sequence <= self._last_sequence[sid]:
            raise ValueError(
                f"sequence numbers must increase; got {record.sequence} after "
                f"{self._last_sequence[sid]}"
            )
        if record.correct != _expected_correct(record):
            raise ValueError("record's correct flag contradicts its pair and answer")
        handle = self._handles.get(sid)
        if handle is None:
            handle = open(self._records_path(sid), "a", encoding="utf-8")
            self._handles[sid] = handle
        handle.write(json.dumps(record.to_json_dict()) + "\n")
        handle.flush()
        self._last_sequence[sid] = record.sequence
        return record

    def iter_records(self, session_id: str) -> Iterator[TrialRecord]:
        """Yield a session's records in order, ignoring a torn final line."""
        path = self._records_path(session_id)
        if not self._session_dir(session_id).exists():
            raise UnknownSessionError(f"no session {session_id!r}")
        if not path.exists():
            return
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
        for i, line in enumerate(lines):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                yield TrialRecord.from_json_dict(json.loads(stripped))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                if i == len(lines) - 1:
                    return  # interrupted write; prefix remains valid
                raise StoreCorruptError(
                    f"damaged record at line {i + 1} of {path}: {exc}"
                ) from exc

    def snapshot(self, session_id: str | None = None, glyph_id: str | None = None) -> tuple[TrialRecord, ...]:
        """Records across sessions, optionally filtered, in append order."""
        if session_id is not None:
            records = list(self.iter_records(session_id))
        else:
            records = []
            for meta in self.sessions():
                records.extend(self.iter_records(meta.session_id))
        if glyph_id is not None:
            records = [r for r in records if r.glyph_id == glyph_id]
        return tuple(records)

    # -- lifecycle -----------------------------------------------------

    def _close_handle(self, session_id: str, durable: bool) -> None:
        handle = self._handles.pop(session_id, None)
        if handle is not None:
            handle.flush()
            if durable:
                os.fsync(handle.fileno())
            handle.close()

    def close(self) -> None:
        for sid in list(self._handles):
            self._close_handle(sid, durable=True)

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
