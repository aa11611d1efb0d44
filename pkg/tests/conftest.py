"""Shared fixtures for the test suite."""

from __future__ import annotations

from datetime import datetime

import numpy as np
import pytest

from glyphlab.exchange import export_archive
from glyphlab.gallery import find_design
from glyphlab.staircase import StaircaseConfig
from glyphlab.store import Store

FIXED_CREATION_TIME = "2026-01-05 12:00:00.000000"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tmp_store(tmp_path):
    with Store(tmp_path / "data") as store:
        yield store


@pytest.fixture
def fast_config():
    """Small session that still exercises several difficulty levels."""
    return StaircaseConfig(trials_per_glyph=30, t_max=6, rng_seed=11)


@pytest.fixture(scope="session")
def coarse_archive():
    """Low-resolution disc archive with samples every 10 units."""
    design = find_design("disc")
    return export_archive(
        design,
        [float(x) for x in range(0, 101, 10)],
        None,
        ppi=48,
        creation_time=FIXED_CREATION_TIME,
    )


@pytest.fixture(scope="session")
def fine_archive():
    """Disc archive on a 0.5-spaced grid, dense enough for default sessions."""
    design = find_design("disc")
    xs = [round(0.5 * i, 6) for i in range(201)]
    return export_archive(
        design, xs, None, ppi=32, creation_time=FIXED_CREATION_TIME
    )


@pytest.fixture
def fixed_clock():
    def _clock() -> datetime:
        return datetime(2026, 1, 5, 12, 0, 0)

    return _clock
