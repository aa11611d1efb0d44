"""glyphlab: design, exchange and psychophysical evaluation of scalar glyphs.

A glyph here is a square, text-free graphic driven by a single parameter
x in [0, 100].  The package renders such glyphs, packs sampled renders
into exchange archives, runs an adaptive pairwise-comparison protocol
against simulated or live observers, and reduces the answers to a
resolution measure: how many distinguishable steps the design actually
conveys.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .canvas import Canvas, decode_png, encode_png, parse_color, parse_size
from .curves import CubicBezierEasing, LinearEasing, WeberRemap, lerp
from .design import (
    GlyphDesign,
    GlyphError,
    RenderError,
    RotationReport,
    check_rotation_invariance,
    check_shepard,
    render,
)
from .exchange import (
    ArchiveFormatError,
    ArchiveIntegrityError,
    ArchiveManifest,
    ArchiveValidationError,
    ExchangeError,
    GlyphArchive,
    export_archive,
    import_archive,
    nearest_sample,
    sample_grid,
    save_archive,
)
from .gallery import GalleryEntry, find_design, list_gallery
from .halton import halton, halton_pairs
from .metrics import (
    AccuracyPoint,
    GlyphScore,
    accuracy_curve,
    auc,
    bootstrap_ci,
    export_curve,
    jnd_crossing,
    jnd_distance,
    parse_score,
    resolution,
    score,
)
from .observers import (
    ObserverModel,
    SessionResult,
    noisy_observer,
    perfect_observer,
    random_observer,
    respond,
    run_session,
    weber_observer,
)
from .session import SessionEngine, StaleTrialError, TrialView
from .staircase import (
    Answer,
    SessionFinished,
    StaircaseConfig,
    StaircaseState,
    TrialSpec,
    apply_answer,
    correct_answer,
    next_trial,
    pick_next_glyph,
)
from .store import SessionMeta, Store, StoreError, TrialRecord, UnknownSessionError

__all__ = [name for name in dir() if not name.startswith("_")]
