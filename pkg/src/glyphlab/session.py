"""Session engine: drives the staircase over concrete glyph targets.

The engine owns trial generation, presentation bookkeeping and record
persistence for one session.  Both the in-process simulation runner and
the HTTP service drive it through the same two calls (``next_view`` /
``submit``), so a simulated run and a service-driven run with equal seeds
and clock produce byte-identical record files.

Targets may be live designs (values presented exactly as generated) or
sampled archives (values snapped to the nearest stored sample; observers
see what would actually be on screen).
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, replace
from datetime import datetime
from typing import Callable, Mapping, Union

import numpy as np

from .design import GlyphDesign, GlyphError
from .exchange import GlyphArchive, format_timestamp, sample_index
from .staircase import (
    Answer,
    SessionFinished,
    StaircaseConfig,
    StaircaseState,
    TrialSpec,
    apply_answer,
    next_trial,
    pick_next_glyph,
)
from .store import SessionMeta, SessionStateError, Store, TrialRecord

Target = Union[GlyphDesign, GlyphArchive]
Clock = Callable[[], datetime]


class StaleTrialError(GlyphError):
    """Submitted token does not match the currently pending trial."""


@dataclass(frozen=True)
class TrialView:
    """What an observer is shown, plus the handle to answer it."""

    token: str
    glyph_id: str
    x1: float
    x2: float
    left_index: int | None
    right_index: int | None
    presented_at: str
    answered: int
    total: int


@dataclass(frozen=True)
class _Pending:
    view: TrialView
    spec: TrialSpec


def _snap(target: Target, spec: TrialSpec) -> tuple[TrialSpec, int | None, int | None]:
    """Snap generated values to archive samples; designs pass through."""
    if isinstance(target, GlyphDesign):
        return spec, None, None
    li = sample_index(target, spec.x1)
    ri = sample_index(target, spec.x2)
    x1 = target.xs[li]
    x2 = target.xs[ri]
    snapped = replace(spec, x1=x1, x2=x2, is_equal=x1 == x2)
    return snapped, li, ri


class SessionEngine:
    """Serialized trial generation and persistence for one session."""

    def __init__(
        self,
        session_id: str,
        targets: Mapping[str, Target],
        config: StaircaseConfig,
        store: Store,
        *,
        clock: Clock | None = None,
        create: bool = True,
    ):
        if not targets:
            raise ValueError("session needs at least one glyph target")
        self.session_id = session_id
        self.targets = dict(targets)
        self.config = config
        self.store = store
        self.clock: Clock = clock if clock is not None else datetime.now
        self._rng = np.random.default_rng(config.rng_seed)
        self._states = {gid: StaircaseState(glyph_id=gid) for gid in sorted(self.targets)}
        self._pending: _Pending | None = None
        self._sequence = 0
        self._finished = False
        self._records: list[TrialRecord] = []
        if create:
            meta = SessionMeta(
                session_id=session_id,
                created_at=format_timestamp(self.clock()),
                glyph_ids=tuple(sorted(self.targets)),
                config=config,
                status="active",
            )
            store.create_session(meta)

    # -- core protocol -------------------------------------------------

    @property
    def finished(self) -> bool:
        return self._finished

    @property
    def records(self) -> tuple[TrialRecord, ...]:
        return tuple(self._records)

    def progress(self) -> tuple[int, int]:
        answered = sum(s.trials_done for s in self._states.values())
        return answered, len(self._states) * self.config.trials_per_glyph

    def _generate(self) -> tuple[TrialSpec, int | None, int | None]:
        gid = pick_next_glyph(self._states, self.config, self._rng)
        spec = next_trial(self._states[gid], self.config, self._rng)
        return _snap(self.targets[gid], spec)

    def next_view(self) -> TrialView | None:
        """The pending trial, generating one if needed; None when finished.

        Re-serving the same pending view is deliberate: a lost response or
        page reload must not burn a fresh trial.
        """
        if self._finished:
            return None
        if self._pending is not None:
            return self._pending.view
        try:
            spec, li, ri = self._generate()
        except SessionFinished:
            self._finish()
            return None
        answered, total = self.progress()
        view = TrialView(
            token=secrets.token_hex(16),
            glyph_id=spec.glyph_id,
            x1=spec.x1,
            x2=spec.x2,
            left_index=li,
            right_index=ri,
            presented_at=format_timestamp(self.clock()),
            answered=answered,
            total=total,
        )
        self._pending = _Pending(view=view, spec=spec)
        return view

    def submit(
        self, token: str, answer: Answer, response_ms: int | None = None
    ) -> tuple[TrialRecord, bool]:
        """Judge and persist the answer for the pending trial.

        The record is appended before any state advances, so a crash right
        after persistence never loses an answered trial.  Each token is
        accepted exactly once; replays raise StaleTrialError and change
        nothing.
        """
        if self._finished:
            raise SessionStateError(f"session {self.session_id!r} is finished")
        if self._pending is None or token != self._pending.view.token:
            raise StaleTrialError("token does not match the pending trial")
        spec = self._pending.spec
        state = self._states[spec.glyph_id]
        new_state, correct = apply_answer(state, spec, answer, self.config)
        record = TrialRecord(
            session_id=self.session_id,
            glyph_id=spec.glyph_id,
            sequence=self._sequence + 1,
            t=spec.t,
            d=spec.d,
            c=spec.c,
            x1=spec.x1,
            x2=spec.x2,
            is_equal=spec.is_equal,
            presented_at=self._pending.view.presented_at,
            answer=answer,
            correct=correct,
            response_ms=response_ms,
        )
        self.store.append(record)
        self._records.append(record)
        self._sequence += 1
        self._states[spec.glyph_id] = new_state
        self._pending = None
        if all(
            s.trials_done >= self.config.trials_per_glyph for s in self._states.values()
        ):
            self._finish()
        return record, correct

    def _finish(self) -> None:
        if not self._finished:
            self._finished = True
            self.store.set_status(self.session_id, "finished")

    def results(self, *, resamples: int = 1000, confidence: float = 0.95):
        """Score every glyph from the records answered so far."""
        from .metrics import score

        return {
            gid: score(
                self._records,
                gid,
                self.config,
                resamples=resamples,
                confidence=confidence,
            )
            for gid in sorted(self.targets)
        }

    # -- restoration ---------------------------------------------------

    @classmethod
    def restore(
        cls,
        store: Store,
        targets: Mapping[str, Target],
        session_id: str,
        *,
        clock: Clock | None = None,
    ) -> "SessionEngine":
        """Rebuild a live engine from persisted records.

        Trial generation is deterministic in the seed, so replaying the
        generator against the recorded answers reproduces both the
        difficulty states and the RNG position; the next trial served after
        a restart is exactly the one an uninterrupted server would have
        produced.
        """
        meta = store.session_meta(session_id)
        missing = [gid for gid in meta.glyph_ids if gid not in targets]
        if missing:
            raise GlyphError(f"cannot restore {session_id!r}; missing targets {missing}")
        engine = cls(
            session_id,
            {gid: targets[gid] for gid in meta.glyph_ids},
            meta.config,
            store,
            clock=clock,
            create=False,
        )
        for record in store.iter_records(session_id):
            spec, _, _ = engine._generate()
            if (
                spec.glyph_id != record.glyph_id
                or spec.t != record.t
                or spec.x1 != record.x1
                or spec.x2 != record.x2
            ):
                raise SessionStateError(
                    f"records of {session_id!r} do not replay against the stored "
                    f"seed and targets (diverged at sequence {record.sequence})"
                )
            state = engine._states[spec.glyph_id]
            new_state, _ = apply_answer(state, spec, record.answer, meta.config)
            engine._states[spec.glyph_id] = new_state
            engine._records.append(record)
            engine._sequence = record.sequence
        if meta.status == "finished":
            engine._finished = True
        return engine
