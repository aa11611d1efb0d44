"""Reading and writing glyph exchange archives (.mglyph files).

An archive is a ZIP holding ``info.json`` followed by one PNG per sampled
parameter value.  The manifest carries exactly the keys ``name``,
``short-name``, ``author``, ``e-mail``, ``version``, ``creation-time`` and
``images``; the last is a list of ``[x, filename]`` pairs sorted by x.
Writers are fully deterministic (fixed member order, timestamps and
compression), so re-serializing an imported archive reproduces it byte for
byte.
"""

from __future__ import annotations

import io
import json
import zipfile
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from hashlib import sha256
from os import cpu_count
from pathlib import Path

import numpy as np

from .canvas import encode_png, png_dimensions
from .design import DEFAULT_PPI, GlyphDesign, GlyphError, render

MANIFEST_KEYS = ("name", "short-name", "author", "e-mail", "version", "creation-time", "images")
TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S.%f"
X_DECIMALS = 6

# Fixed ZIP member metadata; archives must not depend on wall-clock time.
_ZIP_DATE = (1980, 1, 1, 0, 0, 0)
_ZIP_MODE = 0o644 << 16


class ExchangeError(GlyphError):
    """Base class for archive problems."""


class ArchiveFormatError(ExchangeError):
    """The container or manifest structure is not as required."""


class ArchiveValidationError(ExchangeError):
    """The manifest contents violate the format's value rules."""


class ArchiveIntegrityError(ExchangeError):
    """Manifest and image payload disagree."""


def format_timestamp(moment: datetime) -> str:
    return moment.strftime(TIMESTAMP_FORMAT)


@dataclass(frozen=True)
class ArchiveManifest:
    """Parsed contents of ``info.json``."""

    name: str
    short_name: str
    author: str
    email: str
    version: str
    creation_time: str
    images: tuple[tuple[float, str], ...]

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "short-name": self.short_name,
            "author": self.author,
            "e-mail": self.email,
            "version": self.version,
            "creation-time": self.creation_time,
            "images": [[x, fname] for x, fname in self.images],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ArchiveManifest":
        if not isinstance(data, dict):
            raise ArchiveFormatError("manifest must be a JSON object")
        got = tuple(sorted(data.keys()))
        want = tuple(sorted(MANIFEST_KEYS))
        if got != want:
            missing = sorted(set(MANIFEST_KEYS) - set(data))
            extra = sorted(set(data) - set(MANIFEST_KEYS))
            raise ArchiveFormatError(
                f"manifest keys mismatch (missing {missing}, unexpected {extra})"
            )
        images = []
        for item in data["images"]:
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise ArchiveFormatError(f"images entries must be [x, filename] pairs, got {item!r}")
            x, fname = item
            if not isinstance(x, (int, float)) or isinstance(x, bool):
                raise ArchiveFormatError(f"image x value must be numeric, got {x!r}")
            if not isinstance(fname, str):
                raise ArchiveFormatError(f"image filename must be a string, got {fname!r}")
            images.append((float(x), fname))
        return cls(
            name=str(data["name"]),
            short_name=str(data["short-name"]),
            author=str(data["author"]),
            email=str(data["e-mail"]),
            version=str(data["version"]),
            creation_time=str(data["creation-time"]),
            images=tuple(images),
        )


def _validate_manifest_values(manifest: ArchiveManifest) -> None:
    seen = set()
    for x, fname in manifest.images:
        if not (0.0 <= x <= 100.0):
            raise ArchiveValidationError(f"image x={x} outside [0, 100] ({fname})")
        if fname in seen:
            raise ArchiveValidationError(f"duplicate image filename {fname!r}")
        seen.add(fname)
    xs = [x for x, _ in manifest.images]
    for i in range(1, len(xs)):
        if not xs[i] > xs[i - 1]:
            raise ArchiveValidationError(
                f"image x values must be strictly ascending; "
                f"entry {i - 1} has x={xs[i - 1]} followed by x={xs[i]}"
            )


@dataclass(frozen=True)
class GlyphArchive:
    """An in-memory archive: manifest plus raw PNG payloads."""

    manifest: ArchiveManifest
    images: dict[str, bytes]
    resolution: int

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.manifest.images)

    def sample_count(self) -> int:
        return len(self.manifest.images)

    def image_bytes(self, index: int) -> bytes:
        _, fname = self.manifest.images[index]
        return self.images[fname]


def sample_index(archive: GlyphArchive, x: float) -> int:
    """Index of the sample whose x is closest to the request (ties go low)."""
    xs = archive.xs
    if not xs:
        raise ArchiveValidationError("archive has no images")
    if not (0.0 <= x <= 100.0):
        raise ValueError(f"parameter x must lie in [0, 100], got {x}")
    pos = bisect_left(xs, x)
    if pos == 0:
        return 0
    if pos == len(xs):
        return len(xs) - 1
    before, after = xs[pos - 1], xs[pos]
    if x - before <= after - x:
        return pos - 1
    return pos


def nearest_sample(archive: GlyphArchive, x: float) -> tuple[float, bytes]:
    """Snapped parameter value and PNG bytes of the closest sample."""
    idx = sample_index(archive, x)
    return archive.xs[idx], archive.image_bytes(idx)


def archive_digest(data: bytes) -> str:
    """Stable short content id for an archive's raw bytes."""
    return sha256(data).hexdigest()[:16]


def sample_grid(count: int) -> np.ndarray:
    """Evenly spaced parameter values over [0, 100], snapped to 6 decimals."""
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    return np.round(np.linspace(0.0, 100.0, count), X_DECIMALS)


def _write_zip(manifest: ArchiveManifest, images: dict[str, bytes]) -> bytes:
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        info = zipfile.ZipInfo("info.json", date_time=_ZIP_DATE)
        info.external_attr = _ZIP_MODE
        info.create_system = 3
        payload = json.dumps(manifest.to_json_dict(), indent=1).encode()
        zf.writestr(info, payload, compress_type=zipfile.ZIP_DEFLATED, compresslevel=6)
        for _, fname in manifest.images:
            zi = zipfile.ZipInfo(fname, date_time=_ZIP_DATE)
            zi.external_attr = _ZIP_MODE
            zi.create_system = 3
            zf.writestr(zi, images[fname], compress_type=zipfile.ZIP_STORED)
    return buf.getvalue()


def save_archive(archive: GlyphArchive, destination) -> bytes:
    """Serialize an archive; writes to ``destination`` path unless None."""
    data = _write_zip(archive.manifest, archive.images)
    if destination is not None:
        Path(destination).write_bytes(data)
    return data


def export_archive(
    design: GlyphDesign,
    xs,
    destination=None,
    *,
    ppi: int = DEFAULT_PPI,
    name: str | None = None,
    short_name: str | None = None,
    author: str | None = None,
    email: str | None = None,
    version: str | None = None,
    creation_time: str | None = None,
    workers: int | None = None,
) -> GlyphArchive:
    """Render a design over the given x values into an archive.

    Values are snapped to 6 decimals (and must be strictly ascending after
    snapping) so the manifest round-trips exactly through JSON.  Rendering
    and PNG encoding fan out over a thread pool.
    """
    snapped = [round(float(x), X_DECIMALS) for x in xs]
    if creation_time is None:
        creation_time = format_timestamp(datetime.now())
    images_listing = tuple(
        (x, f"{i:05d}.png") for i, x in enumerate(snapped)
    )
    manifest = ArchiveManifest(
        name=design.name if name is None else name,
        short_name=design.short_name if short_name is None else short_name,
        author=design.author if author is None else author,
        email=design.email if email is None else email,
        version=design.version if version is None else version,
        creation_time=creation_time,
        images=images_listing,
    )
    _validate_manifest_values(manifest)

    def _one(x: float) -> bytes:
        return encode_png(render(design, x, ppi))

    n_workers = workers if workers is not None else min(8, cpu_count() or 1)
    if n_workers > 1 and len(snapped) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            payloads = list(pool.map(_one, snapped, chunksize=16))
    else:
        payloads = [_one(x) for x in snapped]
    images = {fname: data for (_, fname), data in zip(images_listing, payloads)}
    archive = GlyphArchive(manifest=manifest, images=images, resolution=ppi)
    if destination is not None:
        Path(destination).write_bytes(_write_zip(manifest, images))
    return archive


def import_archive(source) -> GlyphArchive:
    """Load and validate an archive from a path, raw bytes or a file object.

    Raises ArchiveFormatError for structural problems, then
    ArchiveValidationError for bad manifest values, then
    ArchiveIntegrityError when images are missing, non-square or of mixed
    resolution.  Unlisted extra members are tolerated and dropped.
    """
    if isinstance(source, (str, Path)):
        stream = io.BytesIO(Path(source).read_bytes())
    elif isinstance(source, bytes):
        stream = io.BytesIO(source)
    else:
        stream = io.BytesIO(source.read())
    try:
        zf = zipfile.ZipFile(stream)
    except zipfile.BadZipFile as exc:
        raise ArchiveFormatError(f"not a readable ZIP archive: {exc}") from exc
    with zf:
        names = set(zf.namelist())
        if "info.json" not in names:
            raise ArchiveFormatError("archive is missing info.json")
        try:
            data = json.loads(zf.read("info.json"))
        except json.JSONDecodeError as exc:
            raise ArchiveFormatError(f"info.json is not valid JSON: {exc}") from exc
        manifest = ArchiveManifest.from_json_dict(data)
        _validate_manifest_values(manifest)
        images: dict[str, bytes] = {}
        resolution: int | None = None
        for x, fname in manifest.images:
            if fname not in names:
                raise ArchiveIntegrityError(f"listed image {fname!r} missing from archive")
            payload = zf.read(fname)
            try:
                width, height = png_dimensions(payload)
            except Exception as exc:
                raise ArchiveIntegrityError(f"image {fname!r} is not a readable PNG") from exc
            if width != height:
                raise ArchiveIntegrityError(
                    f"image {fname!r} is {width}x{height}, expected square"
                )
            if resolution is None:
                resolution = width
            elif width != resolution:
                raise ArchiveIntegrityError(
                    f"image {fname!r} resolution {width} differs from {resolution}"
                )
            images[fname] = payload
    if resolution is None:
        raise ArchiveValidationError("archive lists no images")
    return GlyphArchive(manifest=manifest, images=images, resolution=resolution)
