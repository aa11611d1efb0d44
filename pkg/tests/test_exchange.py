"""Archive export, import and the wire contract of info.json."""

from __future__ import annotations

import io
import json
import zipfile
from datetime import datetime
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glyphlab.canvas import png_dimensions
from glyphlab.design import GlyphError
from glyphlab.exchange import (
    MANIFEST_KEYS,
    TIMESTAMP_FORMAT,
    ArchiveFormatError,
    ArchiveIntegrityError,
    ArchiveManifest,
    ArchiveValidationError,
    ExchangeError,
    GlyphArchive,
    archive_digest,
    export_archive,
    format_timestamp,
    import_archive,
    nearest_sample,
    sample_grid,
    sample_index,
    save_archive,
)
from glyphlab.gallery import find_design

from conftest import FIXED_CREATION_TIME


def _zip_bytes(members: list[tuple[str, bytes]]) -> bytes:
    """Hand-rolled ZIP for crafting malformed archives."""
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        for name, payload in members:
            zf.writestr(name, payload)
    return buf.getvalue()


def _manifest_dict(images) -> dict:
    return {
        "name": "Test glyph",
        "short-name": "test",
        "author": "Suite",
        "e-mail": "suite@example.org",
        "version": "1",
        "creation-time": FIXED_CREATION_TIME,
        "images": images,
    }


@pytest.fixture(scope="module")
def tiny_archive():
    design = find_design("line")
    return export_archive(
        design,
        [0.0, 25.0, 50.0, 75.0, 100.0],
        None,
        ppi=32,
        creation_time=FIXED_CREATION_TIME,
    )


class TestManifest:
    def test_key_set_is_closed(self):
        data = _manifest_dict([[0.0, "00000.png"]])
        manifest = ArchiveManifest.from_json_dict(data)
        assert tuple(manifest.to_json_dict().keys()) == MANIFEST_KEYS

    def test_roundtrip_preserves_values(self):
        data = _manifest_dict([[0.0, "00000.png"], [50.5, "00001.png"]])
        manifest = ArchiveManifest.from_json_dict(data)
        assert manifest.to_json_dict() == data

    def test_missing_key_rejected(self):
        data = _manifest_dict([[0.0, "00000.png"]])
        del data["author"]
        with pytest.raises(ArchiveFormatError, match="missing \\['author'\\]"):
            ArchiveManifest.from_json_dict(data)

    def test_extra_key_rejected(self):
        data = _manifest_dict([[0.0, "00000.png"]])
        data["comment"] = "nope"
        with pytest.raises(ArchiveFormatError, match="unexpected \\['comment'\\]"):
            ArchiveManifest.from_json_dict(data)

    def test_non_object_rejected(self):
        with pytest.raises(ArchiveFormatError, match="JSON object"):
            ArchiveManifest.from_json_dict(["not", "a", "dict"])

    @pytest.mark.parametrize(
        "entry",
        [
            [0.0],
            [0.0, "a.png", "extra"],
            ["zero", "a.png"],
            [True, "a.png"],
            [0.0, 17],
        ],
    )
    def test_malformed_image_entry_rejected(self, entry):
        data = _manifest_dict([entry])
        with pytest.raises(ArchiveFormatError):
            ArchiveManifest.from_json_dict(data)

    def test_integer_x_coerced_to_float(self):
        data = _manifest_dict([[0, "00000.png"], [100, "00001.png"]])
        manifest = ArchiveManifest.from_json_dict(data)
        assert manifest.images == ((0.0, "00000.png"), (100.0, "00001.png"))
        assert all(isinstance(x, float) for x, _ in manifest.images)

    def test_timestamp_format_roundtrip(self):
        moment = datetime(2026, 1, 5, 12, 0, 0)
        text = format_timestamp(moment)
        assert text == FIXED_CREATION_TIME
        assert datetime.strptime(text, TIMESTAMP_FORMAT) == moment


class TestExport:
    def test_sample_count_and_names(self, tiny_archive):
        assert tiny_archive.sample_count() == 5
        names = [fname for _, fname in tiny_archive.manifest.images]
        assert names == [f"{i:05d}.png" for i in range(5)]

    def test_xs_are_snapped_to_six_decimals(self):
        design = find_design("line")
        archive = export_archive(
            design,
            [0.1234567891, 50.00000049, 100.0],
            None,
            ppi=16,
            creation_time=FIXED_CREATION_TIME,
        )
        assert archive.xs == (0.123457, 50.0, 100.0)

    def test_snapping_collisions_rejected(self):
        design = find_design("line")
        with pytest.raises(ArchiveValidationError, match="strictly ascending"):
            export_archive(
                design,
                [10.0000001, 10.0000002],
                None,
                ppi=16,
                creation_time=FIXED_CREATION_TIME,
            )

    def test_out_of_range_x_rejected(self):
        design = find_design("line")
        with pytest.raises(ArchiveValidationError, match="outside"):
            export_archive(
                design, [-1.0, 50.0], None, ppi=16, creation_time=FIXED_CREATION_TIME
            )

    def test_metadata_overrides(self):
        design = find_design("line")
        archive = export_archive(
            design,
            [0.0, 100.0],
            None,
            ppi=16,
            name="Override",
            author="Someone",
            creation_time=FIXED_CREATION_TIME,
        )
        assert archive.manifest.name == "Override"
        assert archive.manifest.author == "Someone"
        assert archive.manifest.short_name == design.short_name

    def test_default_creation_time_is_now_shaped(self):
        design = find_design("line")
        archive = export_archive(design, [0.0, 100.0], None, ppi=16)
        parsed = datetime.strptime(archive.manifest.creation_time, TIMESTAMP_FORMAT)
        assert parsed.year >= 2026

    def test_serial_and_threaded_exports_match(self):
        design = find_design("disc")
        xs = [float(x) for x in range(0, 101, 25)]
        serial = export_archive(
            design, xs, None, ppi=24, creation_time=FIXED_CREATION_TIME, workers=1
        )
        threaded = export_archive(
            design, xs, None, ppi=24, creation_time=FIXED_CREATION_TIME, workers=4
        )
        assert save_archive(serial, None) == save_archive(threaded, None)

    def test_destination_file_written(self, tmp_path):
        design = find_design("line")
        target = tmp_path / "line.mglyph"
        archive = export_archive(
            design, [0.0, 100.0], target, ppi=16, creation_time=FIXED_CREATION_TIME
        )
        assert target.read_bytes() == save_archive(archive, None)


class TestZipLayout:
    def test_info_json_is_first_member(self, tiny_archive):
        data = save_archive(tiny_archive, None)
        with zipfile.ZipFile(io.BytesIO(data)) as zf:
            assert zf.namelist()[0] == "info.json"

    def test_member_metadata_is_fixed(self, tiny_archive):
        data = save_archive(tiny_archive, None)
        with zipfile.ZipFile(io.BytesIO(data)) as zf:
            for info in zf.infolist():
                assert info.date_time == (1980, 1, 1, 0, 0, 0)
                assert info.create_system == 3
                assert (info.external_attr >> 16) == 0o644
                if info.filename == "info.json":
                    assert info.compress_type == zipfile.ZIP_DEFLATED
                else:
                    assert info.compress_type == zipfile.ZIP_STORED

    def test_serialization_is_deterministic(self, tiny_archive):
        assert save_archive(tiny_archive, None) == save_archive(tiny_archive, None)

    def test_import_export_roundtrip_is_byte_identical(self, tiny_archive):
        data = save_archive(tiny_archive, None)
        reimported = import_archive(data)
        assert save_archive(reimported, None) == data

    def test_repeated_export_is_byte_identical(self):
        design = find_design("disc")
        xs = [0.0, 40.0, 80.0]
        first = export_archive(
            design, xs, None, ppi=24, creation_time=FIXED_CREATION_TIME
        )
        second = export_archive(
            design, xs, None, ppi=24, creation_time=FIXED_CREATION_TIME
        )
        assert save_archive(first, None) == save_archive(second, None)

    def test_manifest_json_shape_on_disk(self, tiny_archive):
        data = save_archive(tiny_archive, None)
        with zipfile.ZipFile(io.BytesIO(data)) as zf:
            parsed = json.loads(zf.read("info.json"))
        assert list(parsed.keys()) == list(MANIFEST_KEYS)
        assert parsed["images"][0] == [0.0, "00000.png"]


class TestImport:
    def test_accepts_path_bytes_and_file_object(self, tiny_archive, tmp_path):
        data = save_archive(tiny_archive, None)
        path = tmp_path / "a.mglyph"
        path.write_bytes(data)
        for source in (path, str(path), data, io.BytesIO(data)):
            archive = import_archive(source)
            assert archive.xs == tiny_archive.xs

    def test_resolution_read_from_payload(self, tiny_archive):
        data = save_archive(tiny_archive, None)
        archive = import_archive(data)
        assert archive.resolution == 32
        width, height = png_dimensions(archive.image_bytes(0))
        assert (width, height) == (32, 32)

    def test_extra_unlisted_member_tolerated(self, tiny_archive):
        data = save_archive(tiny_archive, None)
        with zipfile.ZipFile(io.BytesIO(data)) as zf:
            members = [(n, zf.read(n)) for n in zf.namelist()]
        members.append(("notes.txt", b"scratch"))
        archive = import_archive(_zip_bytes(members))
        assert "notes.txt" not in archive.images
        assert archive.sample_count() == tiny_archive.sample_count()

    def test_not_a_zip(self):
        with pytest.raises(ArchiveFormatError, match="ZIP"):
            import_archive(b"definitely not a zip")

    def test_missing_info_json(self):
        data = _zip_bytes([("readme.txt", b"hi")])
        with pytest.raises(ArchiveFormatError, match="info.json"):
            import_archive(data)

    def test_unparseable_info_json(self):
        data = _zip_bytes([("info.json", b"{truncated")])
        with pytest.raises(ArchiveFormatError, match="valid JSON"):
            import_archive(data)

    def test_x_outside_range(self, tiny_archive):
        manifest = _manifest_dict([[0.0, "00000.png"], [100.5, "00001.png"]])
        data = _zip_bytes(
            [
                ("info.json", json.dumps(manifest).encode()),
                ("00000.png", tiny_archive.image_bytes(0)),
                ("00001.png", tiny_archive.image_bytes(1)),
            ]
        )
        with pytest.raises(ArchiveValidationError, match="outside"):
            import_archive(data)

    def test_duplicate_filename(self, tiny_archive):
        manifest = _manifest_dict([[0.0, "00000.png"], [50.0, "00000.png"]])
        data = _zip_bytes(
            [
                ("info.json", json.dumps(manifest).encode()),
                ("00000.png", tiny_archive.image_bytes(0)),
            ]
        )
        with pytest.raises(ArchiveValidationError, match="duplicate"):
            import_archive(data)

    def test_non_ascending_xs(self, tiny_archive):
        manifest = _manifest_dict([[50.0, "00000.png"], [50.0, "00001.png"]])
        data = _zip_bytes(
            [
                ("info.json", json.dumps(manifest).encode()),
                ("00000.png", tiny_archive.image_bytes(0)),
                ("00001.png", tiny_archive.image_bytes(1)),
            ]
        )
        with pytest.raises(ArchiveValidationError, match="ascending"):
            import_archive(data)

    def test_listed_image_missing(self, tiny_archive):
        manifest = _manifest_dict([[0.0, "00000.png"], [50.0, "gone.png"]])
        data = _zip_bytes(
            [
                ("info.json", json.dumps(manifest).encode()),
                ("00000.png", tiny_archive.image_bytes(0)),
            ]
        )
        with pytest.raises(ArchiveIntegrityError, match="missing"):
            import_archive(data)

    def test_image_not_a_png(self):
        manifest = _manifest_dict([[0.0, "00000.png"]])
        data = _zip_bytes(
            [
                ("info.json", json.dumps(manifest).encode()),
                ("00000.png", b"not png bytes"),
            ]
        )
        with pytest.raises(ArchiveIntegrityError, match="readable PNG"):
            import_archive(data)

    def test_mixed_resolution(self, tiny_archive, coarse_archive):
        manifest = _manifest_dict([[0.0, "00000.png"], [50.0, "00001.png"]])
        data = _zip_bytes(
            [
                ("info.json", json.dumps(manifest).encode()),
                ("00000.png", tiny_archive.image_bytes(0)),  # 32 px
                ("00001.png", coarse_archive.image_bytes(0)),  # 48 px
            ]
        )
        with pytest.raises(ArchiveIntegrityError, match="differs"):
            import_archive(data)

    def test_empty_image_list(self):
        manifest = _manifest_dict([])
        data = _zip_bytes([("info.json", json.dumps(manifest).encode())])
        with pytest.raises(ArchiveValidationError, match="no images"):
            import_archive(data)

    def test_format_beats_validation(self):
        # A manifest that is both structurally broken and value-broken
        # must surface the structural error.
        manifest = _manifest_dict([[200.0, "00000.png"]])
        del manifest["version"]
        data = _zip_bytes([("info.json", json.dumps(manifest).encode())])
        with pytest.raises(ArchiveFormatError):
            import_archive(data)

    def test_error_hierarchy(self):
        assert issubclass(ArchiveFormatError, ExchangeError)
        assert issubclass(ArchiveValidationError, ExchangeError)
        assert issubclass(ArchiveIntegrityError, ExchangeError)
        assert issubclass(ExchangeError, GlyphError)


class TestSampling:
    def test_exact_hits(self, coarse_archive):
        for i, x in enumerate(coarse_archive.xs):
            assert sample_index(coarse_archive, x) == i

    def test_ties_go_low(self, coarse_archive):
        # 15 is equidistant from 10 and 20.
        assert sample_index(coarse_archive, 15.0) == 1

    def test_nearest_between_samples(self, coarse_archive):
        assert sample_index(coarse_archive, 14.9) == 1
        assert sample_index(coarse_archive, 15.1) == 2

    def test_endpoints(self, coarse_archive):
        assert sample_index(coarse_archive, 0.0) == 0
        assert sample_index(coarse_archive, 100.0) == coarse_archive.sample_count() - 1

    def test_out_of_range_rejected(self, coarse_archive):
        with pytest.raises(ValueError, match="\\[0, 100\\]"):
            sample_index(coarse_archive, -0.001)
        with pytest.raises(ValueError, match="\\[0, 100\\]"):
            sample_index(coarse_archive, 100.001)

    def test_empty_archive_rejected(self):
        manifest = ArchiveManifest(
            name="n",
            short_name="s",
            author="a",
            email="e",
            version="1",
            creation_time=FIXED_CREATION_TIME,
            images=(),
        )
        archive = GlyphArchive(manifest=manifest, images={}, resolution=0)
        with pytest.raises(ArchiveValidationError, match="no images"):
            sample_index(archive, 50.0)

    def test_nearest_sample_returns_snapped_pair(self, coarse_archive):
        x, payload = nearest_sample(coarse_archive, 33.0)
        assert x == 30.0
        assert payload == coarse_archive.image_bytes(3)

    @given(x=st.floats(min_value=0.0, max_value=100.0, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_snap_never_beaten(self, coarse_archive, x):
        idx = sample_index(coarse_archive, x)
        chosen = abs(coarse_archive.xs[idx] - x)
        assert all(chosen <= abs(other - x) for other in coarse_archive.xs)


class TestGridAndDigest:
    def test_grid_endpoints_and_spacing(self):
        grid = sample_grid(11)
        assert grid[0] == 0.0
        assert grid[-1] == 100.0
        assert np.allclose(np.diff(grid), 10.0)

    def test_grid_snapped_to_six_decimals(self):
        grid = sample_grid(10001)
        assert np.array_equal(grid, np.round(grid, 6))

    def test_grid_count_validation(self):
        with pytest.raises(ValueError, match=">= 2"):
            sample_grid(1)

    def test_digest_shape_and_stability(self, tiny_archive):
        data = save_archive(tiny_archive, None)
        digest = archive_digest(data)
        assert len(digest) == 16
        assert set(digest) <= set("0123456789abcdef")
        assert archive_digest(data) == digest
        assert archive_digest(data + b"x") != digest
