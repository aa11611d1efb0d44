"""Reference glyph designs bundled with the package.

Each design maps x in [0, 100] to a drawing on the rounded card.  The
collection spans the main encoding families: scaled outlines and fills,
clock-style angular encodings, a counting field, staggered composites and
an endpoint-symmetric ring pattern.  Helper functions expose the underlying
geometry (hand angles, dot counts, radii) so tests can check the numbers
without parsing pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .canvas import Canvas
from .curves import CubicBezierEasing, lerp
from .design import GlyphDesign
from .halton import halton_pairs

_AUTHOR = "glyphlab gallery"
_EMAIL = "gallery@glyphlab.invalid"

# One-handed dials sweep 59 of 60 graduations so the two extremes stay
# visually distinct; a full 360-degree sweep would render x=0 and x=100
# identically and make absolute readings at the ends ambiguous.
DIAL_SWEEP_DEGREES = 354.0

HALTON_DOT_MAX = 400

_COMPOSITE_CENTERS = ((-0.46, 0.46), (0.46, 0.46), (0.46, -0.46), (-0.46, -0.46))
_COMPOSITE_STARTS = (0.0, 12.5, 25.0, 37.5)
_COMPOSITE_WINDOW = 62.5
_COMPOSITE_R_MIN = 0.05
_COMPOSITE_R_MAX = 0.42
_COMPOSITE_COLORS = ("#e76f51", "#2a9d8f", "#e9c46a", "#577590")
_COMPOSITE_EASING = CubicBezierEasing((0.55, 0.0), (0.45, 1.0))

SHEPARD_RING_COUNT = 8
_SHEPARD_R_LO = 0.05
_SHEPARD_R_HI = 0.90


# -- scaled primitives -------------------------------------------------


def draw_scaled_line(x: float, canvas: Canvas) -> None:
    end = lerp(x, 0.9, -0.9)
    canvas.line((0.9, 0.0), (end, 0.0), width="30p", color="#1f2430")


def draw_scaled_square(x: float, canvas: Canvas) -> None:
    h = lerp(x, 0.02, 0.97)
    canvas.polygon([(-h, -h), (h, -h), (h, h), (-h, h)], color="#264653")


def draw_scaled_disc(x: float, canvas: Canvas) -> None:
    canvas.disc((0.0, 0.0), lerp(x, 0.02, 0.97), color="#2a9d8f")


def _star_points(outer: float, inner: float, points: int = 5):
    pts = []
    for k in range(2 * points):
        r = outer if k % 2 == 0 else inner
        angle = math.pi / 2.0 + k * math.pi / points
        pts.append((r * math.cos(angle), r * math.sin(angle)))
    return pts


def draw_scaled_star(x: float, canvas: Canvas) -> None:
    outer = lerp(x, 0.03, 0.95)
    canvas.polygon(_star_points(outer, 0.40 * outer), color="#bc6c25")


# -- clock dials -------------------------------------------------------


def clock_hand_angle(x: float) -> float:
    """One-handed dial angle in degrees clockwise from 12 o'clock."""
    return x / 100.0 * DIAL_SWEEP_DEGREES


def _hand_tip(angle_deg: float, length: float) -> tuple[float, float]:
    theta = math.radians(angle_deg)
    return (length * math.sin(theta), length * math.cos(theta))


def _draw_dial_base(canvas: Canvas, graduated: bool) -> None:
    canvas.circle((0.0, 0.0), 0.90, width="12p", color="#1d3557")
    if graduated:
        for k in range(60):
            angle = math.radians(k * 6.0)
            ux, uy = math.sin(angle), math.cos(angle)
            if k % 5 == 0:
                r0, r1, w = 0.77, 0.88, "12p"
            else:
                r0, r1, w = 0.80, 0.87, "6p"
            canvas.line((r0 * ux, r0 * uy), (r1 * ux, r1 * uy), width=w, color="#1d3557")


def _draw_one_handed(x: float, canvas: Canvas, graduated: bool) -> None:
    _draw_dial_base(canvas, graduated)
    tip = _hand_tip(clock_hand_angle(x), 0.68)
    canvas.line((0.0, 0.0), tip, width="24p", color="#e63946")
    canvas.disc((0.0, 0.0), 0.045, color="#1d3557")


def draw_clock_plain(x: float, canvas: Canvas) -> None:
    _draw_one_handed(x, canvas, graduated=False)


def draw_clock_graduated(x: float, canvas: Canvas) -> None:
    _draw_one_handed(x, canvas, graduated=True)


def clock_hand_turns(x: float) -> tuple[float, float, float]:
    """Fractional revolutions of the hour, minute and second hands.

    The minute hand completes 10 revolutions over the full range and the
    second hand 100, reading like a three-digit dial; the hour hand sweeps
    once, with the same end-of-scale dead zone as the one-handed dials so
    x=0 and x=100 remain distinguishable.
    """
    hour = x / 100.0 * (DIAL_SWEEP_DEGREES / 360.0)
    minute = math.fmod(x / 10.0, 1.0)
    second = math.fmod(10.0 * x, 1.0)
    return hour, minute, second


def draw_clock_three(x: float, canvas: Canvas) -> None:
    _draw_dial_base(canvas, graduated=True)
    hour, minute, second = clock_hand_turns(x)
    for turns, length, width, color in (
        (hour, 0.40, "30p", "#1d3557"),
        (minute, 0.58, "20p", "#457b9d"),
        (second, 0.72, "10p", "#e63946"),
    ):
        tip = _hand_tip(turns * 360.0, length)
        canvas.line((0.0, 0.0), tip, width=width, color=color)
    canvas.disc((0.0, 0.0), 0.045, color="#1d3557")


# -- counting field ----------------------------------------------------


def halton_dot_count(x: float, n_max: int = HALTON_DOT_MAX) -> int:
    """Number of dots shown at parameter x (proportional, rounded)."""
    return int(round(x / 100.0 * n_max))


def draw_halton_dots(x: float, canvas: Canvas) -> None:
    count = halton_dot_count(x)
    if count == 0:
        return
    pts = halton_pairs(count)
    for u, v in pts:
        canvas.disc((0.94 * (2.0 * u - 1.0), 0.94 * (2.0 * v - 1.0)), 0.036, color="#6d597a")


# -- staggered composites ----------------------------------------------


def composite_radii(x: float, phasing: str = "linear") -> tuple[float, ...]:
    """Radii of the four staggered circles at parameter x.

    Each circle grows inside its own activity window; windows overlap so
    at least one circle is mid-sweep everywhere.  ``phasing`` selects the
    in-window profile: ``linear`` or ``eased`` (slow-in slow-out cubic).
    """
    if phasing not in ("linear", "eased"):
        raise ValueError(f"phasing must be 'linear' or 'eased', got {phasing!r}")
    radii = []
    for start in _COMPOSITE_STARTS:
        p = min(max((x - start) / _COMPOSITE_WINDOW, 0.0), 1.0)
        if phasing == "eased":
            p = _COMPOSITE_EASING(p * 100.0) / 100.0
        radii.append(_COMPOSITE_R_MIN + p * (_COMPOSITE_R_MAX - _COMPOSITE_R_MIN))
    return tuple(radii)


def _draw_composite(x: float, canvas: Canvas, phasing: str) -> None:
    for center, radius, color in zip(
        _COMPOSITE_CENTERS, composite_radii(x, phasing), _COMPOSITE_COLORS
    ):
        canvas.circle(center, radius, width="18p", color=color)


def draw_composite_linear(x: float, canvas: Canvas) -> None:
    _draw_composite(x, canvas, "linear")


def draw_composite_eased(x: float, canvas: Canvas) -> None:
    _draw_composite(x, canvas, "eased")


# -- endpoint-symmetric rings ------------------------------------------


def shepard_ring_phases(x: float) -> tuple[float, ...]:
    """Cyclic phases of the concentric rings; x=0 and x=100 coincide."""
    return tuple(
        math.fmod(x / 100.0 + i / SHEPARD_RING_COUNT, 1.0)
        for i in range(SHEPARD_RING_COUNT)
    )


def draw_shepard_circle(x: float, canvas: Canvas) -> None:
    for phase in shepard_ring_phases(x):
        radius = _SHEPARD_R_LO + (_SHEPARD_R_HI - _SHEPARD_R_LO) * phase
        alpha = math.sin(math.pi * phase) ** 2
        canvas.circle((0.0, 0.0), radius, width="22p", color=(0.23, 0.05, 0.64, alpha))


# -- registry ----------------------------------------------------------


@dataclass(frozen=True)
class GalleryEntry:
    """A bundled design plus curation metadata.

    ``doc_ref`` names the internal documentation page for the design;
    ``note`` summarizes protocol eligibility; ``footprint_monotone`` marks
    designs whose painted area only ever grows with x (pixelwise).
    """

    design: GlyphDesign
    doc_ref: str
    note: str
    footprint_monotone: bool = False


def _design(name, short_name, draw, rotation_class="none"):
    return GlyphDesign(
        name=name,
        short_name=short_name,
        draw=draw,
        author=_AUTHOR,
        email=_EMAIL,
        version="1.0.0",
        illiterate=True,
        rotation_class=rotation_class,
    )


_ENTRIES = (
    GalleryEntry(
        _design("scaled line", "line", draw_scaled_line),
        "gallery/line",
        "length encodes x; grows from a dot to the full width",
        footprint_monotone=True,
    ),
    GalleryEntry(
        _design("scaled square", "square", draw_scaled_square, "quarter-turn"),
        "gallery/square",
        "side length encodes x",
        footprint_monotone=True,
    ),
    GalleryEntry(
        _design("scaled disc", "disc", draw_scaled_disc, "full"),
        "gallery/disc",
        "radius encodes x",
        footprint_monotone=True,
    ),
    GalleryEntry(
        _design("five-point star", "star", draw_scaled_star),
        "gallery/star",
        "outer radius encodes x",
        footprint_monotone=True,
    ),
    GalleryEntry(
        _design("one-handed clock", "clock-plain", draw_clock_plain),
        "gallery/clock-plain",
        "hand angle encodes x on an unmarked dial",
    ),
    GalleryEntry(
        _design("graduated one-handed clock", "clock-graduated", draw_clock_graduated),
        "gallery/clock-graduated",
        "hand angle encodes x; tick marks aid absolute reading",
    ),
    GalleryEntry(
        _design("three-handed clock", "clock-three", draw_clock_three),
        "gallery/clock-three",
        "nested dials at 1x, 10x and 100x sweep rates",
    ),
    GalleryEntry(
        _design("halton dot field", "halton-dots", draw_halton_dots),
        "gallery/halton-dots",
        "dot count encodes x; layout is a stable low-discrepancy prefix",
        footprint_monotone=True,
    ),
    GalleryEntry(
        _design("composite circles, linear", "composite-linear", draw_composite_linear),
        "gallery/composite-linear",
        "four staggered growing circles, linear ramps",
    ),
    GalleryEntry(
        _design("composite circles, eased", "composite-eased", draw_composite_eased),
        "gallery/composite-eased",
        "four staggered growing circles, slow-in slow-out ramps",
    ),
    GalleryEntry(
        _design("shepard circle", "shepard-circle", draw_shepard_circle),
        "gallery/shepard-circle",
        "cyclic ring pattern; extremes render identically, relative use only",
    ),
)


def list_gallery() -> tuple[GalleryEntry, ...]:
    """All bundled designs in display order."""
    return _ENTRIES


def find_design(short_name: str) -> GlyphDesign:
    """Look up a bundled design by its short name."""
    for entry in _ENTRIES:
        if entry.design.short_name == short_name:
            return entry.design
    known = ", ".join(e.design.short_name for e in _ENTRIES)
    raise KeyError(f"no gallery design named {short_name!r}; known: {known}")
