"""Adaptive pairwise-comparison staircase.

Each trial shows two parameter values a distance d apart (or an equal pair),
centered at a uniformly drawn midpoint.  The distance shrinks geometrically
with the difficulty level t; correct discriminations raise t by one, errors
knock it back several levels, and correct "equal" answers leave it alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np


class Answer(enum.Enum):
    """Observer response to a presented pair."""

    LEFT_GREATER = "left"
    EQUAL = "equal"
    RIGHT_GREATER = "right"

    @classmethod
    def from_wire(cls, literal: str) -> "Answer":
        for member in cls:
            if member.value == literal:
                return member
        raise ValueError(
            f"unknown answer literal {literal!r}; expected one of "
            f"{[m.value for m in cls]}"
        )

    def to_wire(self) -> str:
        return self.value


class SessionFinished(Exception):
    """Raised when every glyph in a session has used its trial budget."""


@dataclass(frozen=True)
class StaircaseConfig:
    """Protocol parameters.

    ``d0`` is the starting pair distance, shrunk by ``gamma`` per level;
    ``p_equal`` is the probability of an equal pair; ``decrement`` is how
    many levels an error costs; ``t_max`` caps the level (the default 19 is
    the largest level at which the pair distance still spans at least two
    steps of a 0.01 parameter grid); ``trials_per_glyph`` is the per-glyph
    budget and ``rng_seed`` fixes the trial stream.
    """

    d0: float = 20.0
    gamma: float = 0.7
    p_equal: float = 1.0 / 3.0
    decrement: int = 3
    t_max: int = 19
    trials_per_glyph: int = 177
    rng_seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.d0 <= 100.0):
            raise ValueError(f"d0 must lie in (0, 100], got {self.d0}")
        if not (0.0 < self.gamma < 1.0):
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not (0.0 <= self.p_equal < 1.0):
            raise ValueError(f"p_equal must lie in [0, 1), got {self.p_equal}")
        if self.decrement < 1:
            raise ValueError(f"decrement must be >= 1, got {self.decrement}")
        if self.t_max < 0:
            raise ValueError(f"t_max must be >= 0, got {self.t_max}")
        if self.trials_per_glyph < 1:
            raise ValueError(f"trials_per_glyph must be >= 1, got {self.trials_per_glyph}")

    def distance(self, t: int) -> float:
        """Pair distance at difficulty level t."""
        if not (0 <= t <= self.t_max):
            raise ValueError(f"t must lie in [0, {self.t_max}], got {t}")
        return self.gamma**t * self.d0

    @classmethod
    def for_grid_spacing(cls, spacing: float, **overrides) -> "StaircaseConfig":
        """Config whose t_max keeps the pair distance at least two grid steps."""
        if spacing <= 0.0:
            raise ValueError(f"spacing must be positive, got {spacing}")
        base = cls(**overrides)
        t = 0
        while base.gamma ** (t + 1) * base.d0 >= 2.0 * spacing:
            t += 1
        return replace(base, t_max=t)


@dataclass(frozen=True)
class StaircaseState:
    """Per-glyph progress through the protocol."""

    glyph_id: str
    t: int = 0
    trials_done: int = 0


@dataclass(frozen=True)
class TrialSpec:
    """One generated comparison: left value x1, right value x2."""

    glyph_id: str
    x1: float
    x2: float
    c: float
    d: float
    t: int
    is_equal: bool


def next_trial(state: StaircaseState, config: StaircaseConfig, rng: np.random.Generator) -> TrialSpec:
    """Draw the next pair for a glyph at its current difficulty level.

    With probability ``p_equal`` both sides equal the midpoint c; otherwise
    the midpoint splits into c +- d/2 with the larger value assigned to the
    left or right side by a fair coin.  c is uniform on [d/2, 100 - d/2] so
    both values always stay inside the parameter range.
    """
    d = config.distance(state.t)
    c = float(rng.uniform(d / 2.0, 100.0 - d / 2.0))
    if rng.random() < config.p_equal:
        return TrialSpec(
            glyph_id=state.glyph_id, x1=c, x2=c, c=c, d=d, t=state.t, is_equal=True
        )
    lo = c - d / 2.0
    hi = c + d / 2.0
    if rng.random() < 0.5:
        x1, x2 = hi, lo
    else:
        x1, x2 = lo, hi
    return TrialSpec(
        glyph_id=state.glyph_id, x1=x1, x2=x2, c=c, d=d, t=state.t, is_equal=False
    )


def correct_answer(trial: TrialSpec) -> Answer:
    if trial.is_equal:
        return Answer.EQUAL
    return Answer.LEFT_GREATER if trial.x1 > trial.x2 else Answer.RIGHT_GREATER


def apply_answer(
    state: StaircaseState,
    trial: TrialSpec,
    answer: Answer,
    config: StaircaseConfig,
) -> tuple[StaircaseState, bool]:
    """Advance a glyph's state given the observer's answer.

    Returns the updated state and whether the answer was correct.  Correct
    unequal answers step the level up (capped), correct equal answers leave
    it unchanged, and any error drops it by the configured decrement
    (floored at zero).
    """
    correct = answer == correct_answer(trial)
    if correct and not trial.is_equal:
        t = min(state.t + 1, config.t_max)
    elif correct:
        t = state.t
    else:
        t = max(state.t - config.decrement, 0)
    return replace(state, t=t, trials_done=state.trials_done + 1), correct


def pick_next_glyph(
    states: dict[str, StaircaseState],
    config: StaircaseConfig,
    rng: np.random.Generator,
) -> str:
    """Uniformly choose a glyph that still has trial budget left.

    Glyph order is fixed by sorted id so the choice depends only on the
    RNG stream.  Raises SessionFinished when every glyph is done.
    """
    remaining = sorted(
        gid for gid, st in states.items() if st.trials_done < config.trials_per_glyph
    )
    if not remaining:
        raise SessionFinished("all glyphs have exhausted their trial budget")
    if len(remaining) == 1:
        return remaining[0]
    return remaining[int(rng.integers(len(remaining)))]


def level_grid(config: StaircaseConfig) -> np.ndarray:
    """Pair distances for every level 0..t_max (descending values)."""
    ts = np.arange(config.t_max + 1)
    return config.gamma**ts * config.d0


def max_level_for_spacing(d0: float, gamma: float, spacing: float) -> int:
    """Largest t with gamma**t * d0 >= 2 * spacing (at least 0)."""
    if spacing <= 0.0 or d0 <= 0.0 or not (0.0 < gamma < 1.0):
        raise ValueError("need spacing > 0, d0 > 0 and gamma in (0, 1)")
    t = 0
    while gamma ** (t + 1) * d0 >= 2.0 * spacing:
        t += 1
    return t
