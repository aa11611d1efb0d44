"""Simulated observers and the batch session runner.

Observer models answer presented pairs:

  - ``perfect`` compares the shown values exactly;
  - ``random`` picks one of the three answers uniformly;
  - ``noisy`` reads each value through additive Gaussian noise of constant
    std ``sigma`` and answers "equal" when the perceived difference falls
    inside an equality band of ``tau`` difference-noise standard
    deviations;
  - ``weber`` is the noisy model with magnitude-proportional noise,
    std ``weber_k * x + sigma``, so discrimination worsens toward the high
    end of the scale.

With ``sigma = 0`` (and ``weber_k = 0``) the band collapses to a point and
the noisy model degenerates to the perfect one, whatever ``tau`` is.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .design import GlyphDesign
from .exchange import GlyphArchive
from .metrics import GlyphScore, score
from .session import Clock, SessionEngine, Target
from .staircase import Answer, StaircaseConfig
from .store import SessionMeta, Store, TrialRecord

OBSERVER_KINDS = ("perfect", "random", "noisy", "weber")


@dataclass(frozen=True)
class ObserverModel:
    """Parameters of a simulated observer."""

    kind: str
    sigma: float = 0.0
    tau: float = 0.0
    weber_k: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in OBSERVER_KINDS:
            raise ValueError(f"kind must be one of {OBSERVER_KINDS}, got {self.kind!r}")
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.tau < 0.0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.weber_k < 0.0:
            raise ValueError(f"weber_k must be >= 0, got {self.weber_k}")


def perfect_observer() -> ObserverModel:
    return ObserverModel(kind="perfect")


def random_observer(rng_seed: int = 0) -> ObserverModel:
    return ObserverModel(kind="random", rng_seed=rng_seed)


def noisy_observer(sigma: float, tau: float, rng_seed: int = 0) -> ObserverModel:
    return ObserverModel(kind="noisy", sigma=sigma, tau=tau, rng_seed=rng_seed)


def weber_observer(
    weber_k: float, sigma: float = 0.0, tau: float = 0.0, rng_seed: int = 0
) -> ObserverModel:
    return ObserverModel(
        kind="weber", weber_k=weber_k, sigma=sigma, tau=tau, rng_seed=rng_seed
    )


_ANSWERS = (Answer.LEFT_GREATER, Answer.EQUAL, Answer.RIGHT_GREATER)


def respond(
    model: ObserverModel, x1: float, x2: float, rng: np.random.Generator
) -> Answer:
    """The model's answer to a presented pair (left value x1, right x2)."""
    if model.kind == "random":
        return _ANSWERS[int(rng.integers(3))]
    if model.kind == "perfect":
        if x1 == x2:
            return Answer.EQUAL
        return Answer.LEFT_GREATER if x1 > x2 else Answer.RIGHT_GREATER
    if model.kind == "weber":
        s1 = model.weber_k * x1 + model.sigma
        s2 = model.weber_k * x2 + model.sigma
    else:
        s1 = s2 = model.sigma
    seen1 = x1 + (rng.normal(0.0, s1) if s1 > 0.0 else 0.0)
    seen2 = x2 + (rng.normal(0.0, s2) if s2 > 0.0 else 0.0)
    band = model.tau * math.hypot(s1, s2)
    diff = seen1 - seen2
    if abs(diff) <= band:
        return Answer.EQUAL
    return Answer.LEFT_GREATER if diff > 0.0 else Answer.RIGHT_GREATER


@dataclass(frozen=True)
class SessionResult:
    """Everything produced by one simulated session."""

    meta: SessionMeta
    records: tuple[TrialRecord, ...]
    scores: dict[str, GlyphScore]


def _normalize_targets(targets) -> dict[str, Target]:
    if isinstance(targets, Mapping):
        return dict(targets)
    if isinstance(targets, (GlyphDesign, GlyphArchive)):
        targets = [targets]
    out: dict[str, Target] = {}
    for target in targets:
        if isinstance(target, GlyphDesign):
            gid = target.short_name
        else:
            gid = target.manifest.short_name
        if gid in out:
            raise ValueError(f"duplicate glyph id {gid!r}; pass a mapping to disambiguate")
        out[gid] = target
    return out


def run_session(
    targets,
    observer: ObserverModel,
    config: StaircaseConfig | None = None,
    *,
    store: Store | None = None,
    session_id: str = "sim-000001",
    clock: Clock | None = None,
    resamples: int = 1000,
    confidence: float = 0.95,
) -> SessionResult:
    """Run an observer through a full session and score every glyph.

    ``targets`` may be a single design or archive, a sequence of them, or a
    mapping from glyph id to target.  Records go to ``store`` when given
    (the same layout the service writes); otherwise to a throwaway
    directory.
    """
    config = config if config is not None else StaircaseConfig()
    resolved = _normalize_targets(targets)
    rng = np.random.default_rng(observer.rng_seed)

    def _run(into: Store) -> SessionResult:
        engine = SessionEngine(session_id, resolved, config, into, clock=clock)
        while True:
            view = engine.next_view()
            if view is None:
                break
            answer = respond(observer, view.x1, view.x2, rng)
            engine.submit(view.token, answer)
        records = engine.records
        scores = {
            gid: score(
                records,
                gid,
                config,
                resamples=resamples,
                confidence=confidence,
            )
            for gid in sorted(resolved)
        }
        meta = into.session_meta(session_id)
        return SessionResult(meta=meta, records=records, scores=scores)

    if store is not None:
        return _run(store)
    with tempfile.TemporaryDirectory(prefix="glyphlab-") as tmp:
        with Store(tmp) as scratch:
            return _run(scratch)
