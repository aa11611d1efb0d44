"""Glyph design abstraction: a named drawing rule over the parameter x.

A design renders any x in [0, 100] onto a fresh canvas; the renderer clips
the result to the rounded-corner card and hands back 8-bit RGBA pixels.
Also includes the two structural checks used to vet designs: endpoint
confusability (whether x=0 and x=100 render identically) and rotational
invariance at quarter or half turns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .canvas import Canvas

DEFAULT_PPI = 500

ROTATION_CLASSES = ("none", "half-turn", "quarter-turn", "full")


class GlyphError(Exception):
    """Base class for glyph-specific failures."""


class RenderError(GlyphError):
    """A design's drawing rule raised while rendering."""


@dataclass(frozen=True)
class GlyphDesign:
    """A parameterized drawing rule plus descriptive metadata.

    ``draw`` receives the parameter value and a canvas and must paint the
    glyph for that value.  ``illiterate`` records whether the design avoids
    text, numerals and learned positional codes; ``rotation_class`` states
    the largest rotation (if any) under which renders are pixel-invariant.
    """

    name: str
    short_name: str
    draw: Callable[[float, Canvas], None] = field(repr=False)
    author: str = ""
    email: str = ""
    version: str = "1.0.0"
    illiterate: bool = True
    rotation_class: str = "none"

    def __post_init__(self):
        if not self.short_name:
            raise ValueError("short_name must be non-empty")
        if self.rotation_class not in ROTATION_CLASSES:
            raise ValueError(
                f"rotation_class must be one of {ROTATION_CLASSES}, "
                f"got {self.rotation_class!r}"
            )


def render(design: GlyphDesign, x: float, ppi: int = DEFAULT_PPI) -> NDArray[np.uint8]:
    """Render one glyph instance to a ppi-by-ppi RGBA array.

    The drawing rule paints onto a transparent canvas; afterwards the
    rounded-card mask is applied so corners are transparent.
    """
    x = float(x)
    if not (0.0 <= x <= 100.0):
        raise ValueError(f"parameter x must lie in [0, 100], got {x}")
    if ppi < 4:
        raise ValueError(f"ppi must be at least 4, got {ppi}")
    canvas = Canvas(ppi)
    try:
        design.draw(x, canvas)
    except Exception as exc:
        raise RenderError(f"design {design.short_name!r} failed at x={x}: {exc}") from exc
    canvas.apply_card_mask()
    return canvas.to_rgba()


def check_shepard(design: GlyphDesign, ppi: int = DEFAULT_PPI) -> bool:
    """True when x=0 and x=100 produce byte-identical images.

    Designs with this property wrap around seamlessly (the extremes are
    indistinguishable), which disqualifies them from absolute readings but
    permits unbounded relative ones.
    """
    return bool(np.array_equal(render(design, 0.0, ppi), render(design, 100.0, ppi)))


@dataclass(frozen=True)
class RotationSample:
    """Deviation measurement for one parameter value."""

    x: float
    max_delta: int
    passed: bool


@dataclass(frozen=True)
class RotationReport:
    """Outcome of a rotational-invariance check across sample values."""

    angle: int
    tolerance: int
    samples: tuple[RotationSample, ...]
    passed: bool

    def worst(self) -> int:
        return max((s.max_delta for s in self.samples), default=0)


def check_rotation_invariance(
    design: GlyphDesign,
    angle: int = 180,
    xs: tuple[float, ...] = (0.0, 25.0, 50.0, 75.0, 100.0),
    ppi: int = DEFAULT_PPI,
    tolerance: int = 0,
) -> RotationReport:
    """Compare renders against their rotation by the given angle.

    ``angle`` must be 90 or 180.  For each sampled x the maximum absolute
    per-channel pixel difference is recorded; a sample passes when that
    deviation is within ``tolerance`` (in 8-bit levels).
    """
    if angle not in (90, 180):
        raise ValueError(f"angle must be 90 or 180, got {angle}")
    if tolerance < 0:
        raise ValueError(f"tolerance must be >= 0, got {tolerance}")
    turns = angle // 90
    samples = []
    for x in xs:
        image = render(design, x, ppi)
        rotated = np.rot90(image, k=turns, axes=(0, 1))
        delta = int(
            np.max(np.abs(image.astype(np.int16) - rotated.astype(np.int16)), initial=0)
        )
        samples.append(RotationSample(x=float(x), max_delta=delta, passed=delta <= tolerance))
    passed = all(s.passed for s in samples)
    return RotationReport(angle=angle, tolerance=tolerance, samples=tuple(samples), passed=passed)
