"""Resolution metrics over recorded staircase trials.

The accuracy curve bins trials by difficulty level t.  Integrating it over
the log-distance axis (trapezoids between consecutive levels, missing
levels counted as zero, and a final half-trapezoid down to zero) yields an
area that exponentiates to the glyph's resolution R: the number of
distinguishable steps across the parameter range.  D = 100 / R is the
just-noticeable distance, and the 2/3-accuracy crossing gives an
independent JND estimate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .staircase import StaircaseConfig
from .store import TrialRecord

TWO_THIRDS = 2.0 / 3.0


@dataclass(frozen=True)
class AccuracyPoint:
    """Per-level accuracy with a bootstrap confidence interval."""

    t: int
    d: float
    n: int
    n_correct: int
    accuracy: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class GlyphScore:
    """Summary metrics for one glyph."""

    glyph_id: str
    auc: float
    resolution: float
    jnd_distance: float
    jnd_crossing: float | None
    curve: tuple[AccuracyPoint, ...]


def bootstrap_ci(
    outcomes: Sequence[bool],
    resamples: int = 1000,
    confidence: float = 0.95,
    rng: np.random.Generator | None = None,
) -> tuple[float, float] | None:
    """Percentile bootstrap interval for a success proportion.

    Returns None for an empty sample.  The interval is widened if needed so
    it always contains the observed proportion.
    """
    if resamples < 100:
        raise ValueError(f"resamples must be >= 100, got {resamples}")
    if not (0.0 < confidence < 1.0):
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    values = np.asarray(outcomes, dtype=float)
    n = values.size
    if n == 0:
        return None
    if rng is None:
        rng = np.random.default_rng(0)
    point = float(values.mean())
    draws = rng.integers(n, size=(resamples, n))
    means = values[draws].mean(axis=1)
    tail = (1.0 - confidence) / 2.0 * 100.0
    low, high = np.percentile(means, [tail, 100.0 - tail])
    return min(float(low), point), max(float(high), point)


def accuracy_curve(
    records: Iterable[TrialRecord],
    glyph_id: str,
    config: StaircaseConfig,
    *,
    resamples: int = 1000,
    confidence: float = 0.95,
    rng_seed: int = 0,
) -> tuple[AccuracyPoint, ...]:
    """Accuracy per difficulty level for one glyph, ascending t.

    Levels never visited are omitted (integration treats them as zero).
    Confidence intervals come from a seeded percentile bootstrap, so the
    curve is reproducible for a given record list.
    """
    bins: dict[int, list[bool]] = {}
    for record in records:
        if record.glyph_id == glyph_id:
            bins.setdefault(record.t, []).append(record.correct)
    rng = np.random.default_rng(rng_seed)
    points = []
    for t in sorted(bins):
        outcomes = bins[t]
        n = len(outcomes)
        n_correct = sum(outcomes)
        ci = bootstrap_ci(outcomes, resamples=resamples, confidence=confidence, rng=rng)
        points.append(
            AccuracyPoint(
                t=t,
                d=config.distance(t),
                n=n,
                n_correct=n_correct,
                accuracy=n_correct / n,
                ci_low=ci[0],
                ci_high=ci[1],
            )
        )
    return tuple(points)


def _check_scoring_config(config: StaircaseConfig) -> None:
    if not (0.0 < config.d0 < 100.0):
        raise ValueError(f"scoring needs d0 in (0, 100), got {config.d0}")


def _trapezoid_sum(curve: Sequence[AccuracyPoint], config: StaircaseConfig) -> float:
    """Integral of the zero-filled accuracy curve over ln d.

    Levels run from t=0 to the last visited level; each unit step spans
    ln(1/gamma) on the log-distance axis and the curve is taken to reach
    zero one level beyond the end.
    """
    if not curve:
        return 0.0
    acc = {p.t: p.accuracy for p in curve}
    t_last = max(acc)
    width = math.log(1.0 / config.gamma)
    total = 0.0
    for t in range(t_last + 1):
        a = acc.get(t, 0.0)
        b = acc.get(t + 1, 0.0)
        total += 0.5 * (a + b) * width
    return total


def auc(curve: Sequence[AccuracyPoint], config: StaircaseConfig) -> float:
    """Area under the zero-filled accuracy curve, in bits.

    An empty curve still carries the baseline term log2(100 / d0): with no
    evidence at all, the range is only known to within the starting
    distance.
    """
    _check_scoring_config(config)
    total = _trapezoid_sum(curve, config)
    return (total + math.log(100.0 / config.d0)) / math.log(2.0)


def resolution(curve: Sequence[AccuracyPoint], config: StaircaseConfig) -> float:
    """Number of distinguishable steps: 2 ** auc, computed in one shot."""
    _check_scoring_config(config)
    total = _trapezoid_sum(curve, config)
    return (100.0 / config.d0) * math.exp(total)


def jnd_distance(curve: Sequence[AccuracyPoint], config: StaircaseConfig) -> float:
    """Resolvable parameter difference implied by the resolution."""
    return 100.0 / resolution(curve, config)


def jnd_crossing(curve: Sequence[AccuracyPoint], config: StaircaseConfig) -> float | None:
    """Distance where measured accuracy crosses 2/3, interpolated in ln d.

    Uses only visited levels.  When the curve crosses several times the
    deepest crossing (smallest d) is returned; None when accuracy never
    meets the threshold.
    """
    _check_scoring_config(config)
    pts = sorted(curve, key=lambda p: p.t)
    candidates = []
    for p in pts:
        if p.accuracy == TWO_THIRDS:
            candidates.append(p.d)
    for a, b in zip(pts, pts[1:]):
        da, db = a.accuracy - TWO_THIRDS, b.accuracy - TWO_THIRDS
        if da * db < 0.0:
            ua, ub = math.log(a.d), math.log(b.d)
            u = ua + (TWO_THIRDS - a.accuracy) * (ub - ua) / (b.accuracy - a.accuracy)
            candidates.append(math.exp(u))
    if not candidates:
        return None
    return min(candidates)


def score(
    records: Iterable[TrialRecord],
    glyph_id: str,
    config: StaircaseConfig,
    *,
    resamples: int = 1000,
    confidence: float = 0.95,
    rng_seed: int = 0,
) -> GlyphScore:
    """Full metric bundle for one glyph from raw records."""
    curve = accuracy_curve(
        records,
        glyph_id,
        config,
        resamples=resamples,
        confidence=confidence,
        rng_seed=rng_seed,
    )
    return GlyphScore(
        glyph_id=glyph_id,
        auc=auc(curve, config),
        resolution=resolution(curve, config),
        jnd_distance=jnd_distance(curve, config),
        jnd_crossing=jnd_crossing(curve, config),
        curve=curve,
    )


# -- serialization -----------------------------------------------------


def score_to_json_dict(result: GlyphScore) -> dict:
    return {
        "glyph_id": result.glyph_id,
        "auc": result.auc,
        "resolution": result.resolution,
        "jnd_distance": result.jnd_distance,
        "jnd_crossing": result.jnd_crossing,
        "curve": [
            {
                "t": p.t,
                "d": p.d,
                "n": p.n,
                "n_correct": p.n_correct,
                "accuracy": p.accuracy,
                "ci_low": p.ci_low,
                "ci_high": p.ci_high,
            }
            for p in result.curve
        ],
    }


def score_from_json_dict(data: dict) -> GlyphScore:
    curve = tuple(
        AccuracyPoint(
            t=int(p["t"]),
            d=float(p["d"]),
            n=int(p["n"]),
            n_correct=int(p["n_correct"]),
            accuracy=float(p["accuracy"]),
            ci_low=float(p["ci_low"]),
            ci_high=float(p["ci_high"]),
        )
        for p in data["curve"]
    )
    crossing = data["jnd_crossing"]
    return GlyphScore(
        glyph_id=data["glyph_id"],
        auc=float(data["auc"]),
        resolution=float(data["resolution"]),
        jnd_distance=float(data["jnd_distance"]),
        jnd_crossing=None if crossing is None else float(crossing),
        curve=curve,
    )


def export_curve(result: GlyphScore, fmt: str = "csv") -> str:
    """Serialize a score as ``csv`` or ``json``.

    The CSV starts with the per-level table (t, d, n, accuracy, ci_low,
    ci_high) and ends with a two-line summary block naming auc, resolution,
    jnd_distance and jnd_crossing.  JSON round-trips exactly through
    ``parse_score``.
    """
    if fmt == "json":
        return json.dumps(score_to_json_dict(result), indent=1)
    if fmt != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    lines = ["t,d,n,accuracy,ci_low,ci_high"]
    for p in result.curve:
        lines.append(
            f"{p.t},{p.d!r},{p.n},{p.accuracy!r},{p.ci_low!r},{p.ci_high!r}"
        )
    lines.append("auc,resolution,jnd_distance,jnd_crossing")
    crossing = "" if result.jnd_crossing is None else repr(result.jnd_crossing)
    lines.append(f"{result.auc!r},{result.resolution!r},{result.jnd_distance!r},{crossing}")
    return "\n".join(lines) + "\n"


def parse_score(text: str) -> GlyphScore:
    """Inverse of ``export_curve(..., fmt='json')``."""
    return score_from_json_dict(json.loads(text))
