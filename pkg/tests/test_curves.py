"""Parameter mappings: lerp, cubic easing, perceptual remaps."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glyphlab.curves import CubicBezierEasing, LinearEasing, WeberRemap, lerp

finite = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestLerp:
    @given(a=finite, b=finite)
    def test_endpoints_exact(self, a, b):
        assert lerp(0.0, a, b) == a
        assert lerp(100.0, a, b) == b

    def test_paper_style_example(self):
        assert lerp(100.0, 0.01, -1.0) == -1.0

    def test_midpoint(self):
        assert lerp(50.0, 0.0, 10.0) == 5.0

    @given(
        x=st.floats(min_value=1e-6, max_value=99.999999, allow_nan=False),
        a=finite,
        b=finite,
    )
    def test_affine_formula_interior(self, x, a, b):
        assert lerp(x, a, b) == a + (x / 100.0) * (b - a)

    @given(x=st.floats(allow_nan=False).filter(lambda v: v < 0.0 or v > 100.0))
    def test_domain_error(self, x):
        with pytest.raises(ValueError, match=r"\[0, 100\]"):
            lerp(x, 0.0, 1.0)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            lerp(float("nan"), 0.0, 1.0)


class TestLinearEasing:
    def test_identity(self):
        ease = LinearEasing()
        for x in (0.0, 12.5, 100.0):
            assert ease(x) == x


# independent root-based evaluation of the same cubic
def _bezier_oracle(p1, p2, x):
    u = x / 100.0
    # coefficients of B_x(s) - u = 0 with control xs (0, p1x, p2x, 1)
    c3 = 3.0 * p1[0] - 3.0 * p2[0] + 1.0
    c2 = -6.0 * p1[0] + 3.0 * p2[0]
    c1 = 3.0 * p1[0]
    roots = np.roots([c3, c2, c1, -u])
    real = [r.real for r in roots if abs(r.imag) < 1e-9 and -1e-9 <= r.real <= 1 + 1e-9]
    assert real, f"no root for u={u}"
    s = min(real, key=lambda r: abs(r - u))
    s = min(max(s, 0.0), 1.0)
    omt = 1.0 - s
    return 100.0 * (3 * p1[1] * s * omt**2 + 3 * p2[1] * s**2 * omt + s**3)


class TestCubicBezier:
    def test_endpoints_exact(self):
        ease = CubicBezierEasing((0.3, 0.0), (0.7, 1.0))
        assert ease(0.0) == 0.0
        assert ease(100.0) == 100.0

    def test_linear_control_points_give_identity(self):
        ease = CubicBezierEasing((1 / 3, 1 / 3), (2 / 3, 2 / 3))
        for x in np.linspace(0, 100, 21):
            assert ease(float(x)) == pytest.approx(float(x), abs=1e-6)

    @given(
        p1x=unit, p1y=unit, p2x=unit, p2y=unit,
        x=st.floats(min_value=0.5, max_value=99.5),
    )
    @settings(max_examples=60)
    def test_matches_root_oracle(self, p1x, p1y, p2x, p2y, x):
        p1, p2 = (p1x, p1y), (p2x, p2y)
        ease = CubicBezierEasing(p1, p2)
        assert ease(x) == pytest.approx(_bezier_oracle(p1, p2, x), abs=1e-5)

    @given(p1x=unit, p1y=unit, p2x=unit, p2y=unit)
    @settings(max_examples=40)
    def test_monotone_when_controls_in_unit_box(self, p1x, p1y, p2x, p2y):
        ease = CubicBezierEasing((p1x, p1y), (p2x, p2y))
        values = [ease(float(x)) for x in np.linspace(0, 100, 41)]
        assert all(b >= a - 1e-7 for a, b in zip(values, values[1:]))

    def test_control_point_outside_box_rejected(self):
        with pytest.raises(ValueError, match="unit box"):
            CubicBezierEasing((1.2, 0.0), (0.5, 0.5))
        with pytest.raises(ValueError, match="unit box"):
            CubicBezierEasing((0.5, 0.5), (0.5, -0.1))

    def test_strong_s_curve_shape(self):
        ease = CubicBezierEasing((1.0, 0.0), (0.0, 1.0))
        assert ease(25.0) < 25.0  # slow start
        assert ease(75.0) > 75.0  # slow end
        # This curve's horizontal component is flat to machine precision
        # around the midpoint, so the inverse is only determined to ~1e-5.
        assert ease(50.0) == pytest.approx(50.0, abs=1e-4)


class TestWeberRemap:
    def test_identity_passthrough(self):
        remap = WeberRemap()
        assert remap(37.5) == 37.5

    def test_logarithmic_endpoints_exact(self):
        remap = WeberRemap(kind="logarithmic", s0=5.0)
        assert remap(0.0) == 0.0
        assert remap(100.0) == 100.0

    def test_logarithmic_compresses_high_end(self):
        remap = WeberRemap(kind="logarithmic", s0=1.0)
        # equal input steps should shrink in output toward the top
        low_gain = remap(10.0) - remap(0.0)
        high_gain = remap(100.0) - remap(90.0)
        assert low_gain > 4.0 * high_gain

    def test_logarithmic_closed_form(self):
        remap = WeberRemap(kind="logarithmic", s0=10.0)
        expected = 100.0 * math.log(60.0 / 10.0) / math.log(110.0 / 10.0)
        assert remap(50.0) == pytest.approx(expected, rel=1e-12)

    def test_power_closed_form(self):
        remap = WeberRemap(kind="power", k=0.5)
        assert remap(25.0) == pytest.approx(50.0, rel=1e-12)
        assert remap(100.0) == 100.0
        assert remap(0.0) == 0.0

    def test_bezier_kind_delegates(self):
        curve = CubicBezierEasing((0.4, 0.0), (0.6, 1.0))
        remap = WeberRemap(kind="bezier", bezier=curve)
        assert remap(33.0) == curve(33.0)

    @given(
        kind=st.sampled_from(["identity", "logarithmic", "power"]),
        k=st.floats(min_value=0.2, max_value=3.0),
        s0=st.floats(min_value=0.1, max_value=50.0),
    )
    @settings(max_examples=40)
    def test_monotone_over_grid(self, kind, k, s0):
        remap = WeberRemap(kind=kind, k=k, s0=s0)
        values = [remap(float(x)) for x in np.linspace(0, 100, 51)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[0] == 0.0
        assert values[-1] == 100.0

    def test_validation(self):
        with pytest.raises(ValueError, match="unknown remap kind"):
            WeberRemap(kind="exp")
        with pytest.raises(ValueError, match="s0 > 0"):
            WeberRemap(kind="logarithmic", s0=0.0)
        with pytest.raises(ValueError, match="k > 0"):
            WeberRemap(kind="power", k=-1.0)
        with pytest.raises(ValueError, match="needs a CubicBezierEasing"):
            WeberRemap(kind="bezier")
