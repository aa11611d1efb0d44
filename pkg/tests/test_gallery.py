"""Bundled designs: eligibility, geometry helpers, pixel-level invariants."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glyphlab.canvas import pixel_centers
from glyphlab.design import check_rotation_invariance, check_shepard, render
from glyphlab.gallery import (
    DIAL_SWEEP_DEGREES,
    HALTON_DOT_MAX,
    clock_hand_angle,
    clock_hand_turns,
    composite_radii,
    find_design,
    halton_dot_count,
    list_gallery,
    shepard_ring_phases,
)

PPI = 160  # low-res renders keep the pixel tests quick


class TestRegistry:
    def test_eleven_designs(self):
        assert len(list_gallery()) == 11

    def test_short_names_unique(self):
        names = [e.design.short_name for e in list_gallery()]
        assert len(set(names)) == len(names)

    def test_all_designs_illiterate(self):
        assert all(e.design.illiterate for e in list_gallery())

    def test_metadata_populated(self):
        for e in list_gallery():
            assert e.design.name
            assert e.doc_ref.startswith("gallery/")
            assert e.note

    def test_find_design_error_lists_names(self):
        with pytest.raises(KeyError, match="disc"):
            find_design("nope")


class TestEligibility:
    def test_only_shepard_circle_wraps(self):
        for e in list_gallery():
            expected = e.design.short_name == "shepard-circle"
            assert check_shepard(e.design, ppi=PPI) is expected, e.design.short_name


class TestFootprintMonotonicity:
    @pytest.mark.parametrize(
        "short_name",
        [e.design.short_name for e in list_gallery() if e.footprint_monotone],
    )
    def test_alpha_never_shrinks(self, short_name):
        design = find_design(short_name)
        previous = None
        for x in np.linspace(0.0, 100.0, 9):
            alpha = render(design, float(x), ppi=PPI)[..., 3].astype(int)
            if previous is not None:
                assert int((previous - alpha).max()) <= 0
            previous = alpha


class TestClocks:
    def test_one_handed_angle_scale(self):
        assert clock_hand_angle(0.0) == 0.0
        assert clock_hand_angle(100.0) == DIAL_SWEEP_DEGREES
        assert clock_hand_angle(50.0) == pytest.approx(DIAL_SWEEP_DEGREES / 2)

    def test_extremes_render_differently(self):
        # the dead zone keeps 0 and 100 tellable apart on every dial
        for name in ("clock-plain", "clock-graduated", "clock-three"):
            a = render(find_design(name), 0.0, ppi=PPI)
            b = render(find_design(name), 100.0, ppi=PPI)
            assert not np.array_equal(a, b), name

    @given(x=st.floats(min_value=0.0, max_value=90.0, allow_nan=False))
    @settings(max_examples=30)
    def test_three_handed_period_structure(self, x):
        h1, m1, s1 = clock_hand_turns(x)
        h2, m2, s2 = clock_hand_turns(x + 10.0)
        # ten units later the fast hands are back where they were
        assert m2 == pytest.approx(m1, abs=1e-9)
        assert s2 == pytest.approx(s1, abs=1e-9)
        assert h2 - h1 == pytest.approx(0.1 * DIAL_SWEEP_DEGREES / 360.0, abs=1e-9)

    def test_second_hand_resolves_tiny_steps(self):
        _, _, s_a = clock_hand_turns(50.0)
        _, _, s_b = clock_hand_turns(50.002)
        # 0.002 units is 7.2 degrees of second hand, easily visible
        assert (s_b - s_a) * 360.0 == pytest.approx(7.2, abs=1e-9)

    def test_graduated_and_plain_share_hand_geometry(self):
        x = 37.7
        plain = render(find_design("clock-plain"), x, ppi=300).astype(int)
        graduated = render(find_design("clock-graduated"), x, ppi=300).astype(int)
        xs = pixel_centers(300)
        gx, gy = np.meshgrid(xs, xs[::-1])
        radius = np.hypot(gx, gy)
        inner = radius < 0.74  # hand and hub live inside, ticks outside
        assert np.array_equal(plain[inner], graduated[inner])
        assert np.abs(plain - graduated).max() > 0  # ticks do differ

    def test_clock_not_rotation_invariant(self):
        report = check_rotation_invariance(find_design("clock-plain"), 180, ppi=PPI)
        assert not report.passed


class TestHaltonDots:
    def test_count_formula(self):
        assert halton_dot_count(0.0) == 0
        assert halton_dot_count(100.0) == HALTON_DOT_MAX
        assert halton_dot_count(50.0) == HALTON_DOT_MAX // 2
        for x in np.linspace(0.0, 100.0, 41):
            assert halton_dot_count(float(x)) == int(round(x / 100.0 * HALTON_DOT_MAX))

    def test_count_monotone(self):
        counts = [halton_dot_count(float(x)) for x in np.linspace(0, 100, 201)]
        assert all(b >= a for a, b in zip(counts, counts[1:]))

    def test_zero_dots_fully_transparent(self):
        img = render(find_design("halton-dots"), 0.0, ppi=PPI)
        assert img[..., 3].sum() == 0

    def test_full_count_paints_many_dots(self):
        img = render(find_design("halton-dots"), 100.0, ppi=PPI)
        assert (img[..., 3] == 255).sum() > 1000


class TestCompositeCircles:
    def test_bounds_at_extremes(self):
        for phasing in ("linear", "eased"):
            assert composite_radii(0.0, phasing) == (0.05,) * 4
            lo, hi = min(composite_radii(100.0, phasing)), max(composite_radii(100.0, phasing))
            assert lo == hi == pytest.approx(0.42, abs=1e-9)

    def test_radii_monotone_and_smooth(self):
        for phasing in ("linear", "eased"):
            grid = np.linspace(0.0, 100.0, 401)
            radii = np.array([composite_radii(float(x), phasing) for x in grid])
            steps = np.diff(radii, axis=0)
            assert steps.min() >= -1e-12, phasing
            assert steps.max() < 0.01, phasing  # no jumps

    def test_staggered_activity(self):
        # early on, only the first circle has started growing
        r = composite_radii(6.0, "linear")
        assert r[0] > 0.05
        assert r[1] == r[2] == r[3] == 0.05

    def test_eased_differs_mid_window(self):
        assert composite_radii(20.0, "eased") != composite_radii(20.0, "linear")

    def test_unknown_phasing_rejected(self):
        with pytest.raises(ValueError, match="phasing"):
            composite_radii(10.0, "cubic")


class TestShepardRings:
    def test_phases_wrap_exactly(self):
        assert shepard_ring_phases(0.0) == shepard_ring_phases(100.0)

    def test_phases_evenly_staggered(self):
        phases = shepard_ring_phases(0.0)
        gaps = np.diff(sorted(phases))
        assert np.allclose(gaps, 1.0 / len(phases))

    def test_midrange_render_nonempty(self):
        img = render(find_design("shepard-circle"), 41.0, ppi=PPI)
        assert img[..., 3].max() > 0

    def test_ring_pattern_rotation_invariant(self):
        report = check_rotation_invariance(find_design("shepard-circle"), 90, ppi=PPI)
        assert report.passed
        assert report.worst() == 0


class TestSquareRotation:
    def test_quarter_turn_within_quantization(self):
        # corner ties can flip a single 8-bit level; anything beyond that
        # would mean real asymmetry
        report = check_rotation_invariance(find_design("square"), 90, ppi=PPI, tolerance=1)
        assert report.passed
