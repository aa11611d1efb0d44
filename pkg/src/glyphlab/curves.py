"""Mappings from the scalar parameter x in [0, 100] to drawing quantities.

Provides linear interpolation, CSS-style cubic Bezier easing restricted to
the unit box (which guarantees monotonicity), and perception-motivated
remaps of the parameter axis.  All mappings are exact at both endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

X_MIN = 0.0
X_MAX = 100.0
_BISECT_TOL = 1e-9


def _check_domain(x: float) -> float:
    x = float(x)
    if not (X_MIN <= x <= X_MAX):
        raise ValueError(f"parameter x must lie in [0, 100], got {x}")
    return x


def lerp(x: float, a: float, b: float) -> float:
    """Linearly interpolate from a (at x=0) to b (at x=100).

    Endpoints return a and b exactly; interior points follow
    ``a + (x / 100) * (b - a)``.
    """
    x = _check_domain(x)
    if x == X_MIN:
        return float(a)
    if x == X_MAX:
        return float(b)
    return a + (x / 100.0) * (b - a)


class LinearEasing:
    """Identity easing on [0, 100]."""

    def __call__(self, x: float) -> float:
        return _check_domain(x)

    def __repr__(self) -> str:
        return "LinearEasing()"


@dataclass(frozen=True)
class CubicBezierEasing:
    """CSS-style timing curve with control points constrained to the unit box.

    The curve runs from (0, 0) to (1, 1) with interior control points
    ``p1`` and ``p2``; keeping both inside the unit square makes the
    horizontal component strictly monotone, so inversion by bisection is
    well defined.  Calling the object maps x in [0, 100] through the curve.
    """

    p1: tuple[float, float]
    p2: tuple[float, float]

    def __post_init__(self):
        for name, point in (("p1", self.p1), ("p2", self.p2)):
            px, py = point
            if not (0.0 <= px <= 1.0 and 0.0 <= py <= 1.0):
                raise ValueError(
                    f"control point {name} must lie in the unit box, got {point}"
                )

    def _component(self, s: float, c1: float, c2: float) -> float:
        u = 1.0 - s
        return 3.0 * c1 * s * u * u + 3.0 * c2 * s * s * u + s * s * s

    def _edge(self, u: float, strict_below: bool) -> float:
        c1, c2 = self.p1[0], self.p2[0]
        lo, hi = 0.0, 1.0
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            value = self._component(mid, c1, c2)
            below = value < u if strict_below else value <= u
            if below:
                lo = mid
            else:
                hi = mid
            if hi - lo <= _BISECT_TOL:
                break
        return 0.5 * (lo + hi)

    def _solve(self, u: float) -> float:
        # The horizontal component can be flat enough near an inflection
        # that a whole interval of s evaluates to exactly u in floats.
        # Bracketing that plateau from both sides and taking its midpoint
        # keeps the inverse accurate there too.
        return 0.5 * (self._edge(u, True) + self._edge(u, False))

    def __call__(self, x: float) -> float:
        x = _check_domain(x)
        if x == X_MIN:
            return 0.0
        if x == X_MAX:
            return 100.0
        s = self._solve(x / 100.0)
        return 100.0 * self._component(s, self.p1[1], self.p2[1])


@dataclass(frozen=True)
class WeberRemap:
    """Remap of the parameter axis compensating for magnitude-dependent acuity.

    Kinds:
      - ``identity``: pass-through.
      - ``logarithmic``: ``100 * ln((s0 + x) / s0) / ln((s0 + 100) / s0)``,
        compressing the high end the way log-domain sensitivity suggests;
        ``s0 > 0`` sets where compression starts to bite.
      - ``power``: ``100 * (x / 100) ** k`` with ``k > 0``.
      - ``bezier``: arbitrary monotone shaping via a unit-box cubic.
    """

    kind: str = "identity"
    k: float = 1.0
    s0: float = 1.0
    bezier: CubicBezierEasing | None = field(default=None)

    _KINDS = ("identity", "logarithmic", "power", "bezier")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown remap kind {self.kind!r}; expected one of {self._KINDS}")
        if self.kind == "logarithmic" and not self.s0 > 0.0:
            raise ValueError(f"logarithmic remap needs s0 > 0, got {self.s0}")
        if self.kind == "power" and not self.k > 0.0:
            raise ValueError(f"power remap needs k > 0, got {self.k}")
        if self.kind == "bezier" and self.bezier is None:
            raise ValueError("bezier remap needs a CubicBezierEasing instance")

    def __call__(self, x: float) -> float:
        x = _check_domain(x)
        if self.kind == "identity":
            return x
        if self.kind == "logarithmic":
            # Grouping the ratio keeps the x=100 endpoint exact.
            return 100.0 * (
                math.log((self.s0 + x) / self.s0)
                / math.log((self.s0 + 100.0) / self.s0)
            )
        if self.kind == "power":
            return 100.0 * (x / 100.0) ** self.k
        return self.bezier(x)
