"""Command line interface.

Subcommands: ``gallery`` (list bundled designs), ``export`` (render a
design into an exchange archive), ``validate`` (check an archive),
``simulate`` (run a model observer through a session), ``score`` (recompute
metrics from a record file) and ``serve`` (start the HTTP service).

Exit codes: 0 success, 1 failed validation, 2 bad arguments or parameters,
3 unreadable or unwritable files, 4 service could not bind its port.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
import zipfile
from datetime import datetime
from pathlib import Path

from . import __version__
from .canvas import png_dimensions
from .exchange import (
    ArchiveManifest,
    ArchiveFormatError,
    ArchiveValidationError,
    ExchangeError,
    _validate_manifest_values,
    export_archive,
    format_timestamp,
    import_archive,
    sample_grid,
)
from .gallery import find_design, list_gallery
from .metrics import export_curve, score, score_to_json_dict
from .observers import (
    ObserverModel,
    run_session,
)
from .staircase import StaircaseConfig
from .store import TrialRecord

ENV_DATA_DIR = "MGLYPH_DATA_DIR"


def _default_data_dir() -> str:
    return os.environ.get(ENV_DATA_DIR, "./mglyph-data")


# -- subcommand implementations ---------------------------------------


def _cmd_gallery(_args) -> int:
    rows = [
        (
            e.design.short_name,
            e.design.name,
            e.design.rotation_class,
            "yes" if e.footprint_monotone else "no",
            e.note,
        )
        for e in list_gallery()
    ]
    widths = [max(len(r[i]) for r in rows + [_GALLERY_HEADER]) for i in range(4)]
    header = _GALLERY_HEADER
    print(
        f"{header[0]:<{widths[0]}}  {header[1]:<{widths[1]}}  "
        f"{header[2]:<{widths[2]}}  {header[3]:<{widths[3]}}  {header[4]}"
    )
    for r in rows:
        print(
            f"{r[0]:<{widths[0]}}  {r[1]:<{widths[1]}}  "
            f"{r[2]:<{widths[2]}}  {r[3]:<{widths[3]}}  {r[4]}"
        )
    return 0


_GALLERY_HEADER = ("short-name", "name", "rotation", "monotone", "notes")


def _cmd_export(args) -> int:
    try:
        design = find_design(args.glyph)
    except KeyError:
        names = ", ".join(e.design.short_name for e in list_gallery())
        print(f"unknown glyph {args.glyph!r}; available: {names}", file=sys.stderr)
        return 2
    if args.samples < 2:
        print(f"--samples must be >= 2, got {args.samples}", file=sys.stderr)
        return 2
    creation_time = args.creation_time
    if creation_time is None:
        creation_time = format_timestamp(datetime.now())
    try:
        export_archive(
            design,
            sample_grid(args.samples),
            args.out,
            ppi=args.ppi,
            author=args.author,
            email=args.email,
            version=args.set_version,
            creation_time=creation_time,
            workers=args.workers,
        )
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {args.out} ({args.samples} samples at {args.ppi} ppi)")
    return 0


def _cmd_validate(args) -> int:
    path = Path(args.archive)
    checks: list[tuple[str, bool, str]] = []

    def check(label: str, ok: bool, detail: str = "") -> bool:
        checks.append((label, ok, detail))
        return ok

    failed = False
    try:
        raw = path.read_bytes()
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return 3

    import io as _io

    manifest = None
    zf = None
    try:
        zf = zipfile.ZipFile(_io.BytesIO(raw))
        check("archive is a readable ZIP", True)
    except zipfile.BadZipFile as exc:
        check("archive is a readable ZIP", False, str(exc))
        failed = True

    if zf is not None:
        names = set(zf.namelist())
        if check("info.json present", "info.json" in names):
            try:
                data = json.loads(zf.read("info.json"))
                check("info.json parses as JSON", True)
                try:
                    manifest = ArchiveManifest.from_json_dict(data)
                    check("manifest has exactly the required keys", True)
                except ArchiveFormatError as exc:
                    check("manifest has exactly the required keys", False, str(exc))
                    failed = True
            except json.JSONDecodeError as exc:
                check("info.json parses as JSON", False, str(exc))
                failed = True
        else:
            failed = True

    if manifest is not None:
        try:
            _validate_manifest_values(manifest)
            check("x values sorted, in range, filenames unique", True)
        except ArchiveValidationError as exc:
            check("x values sorted, in range, filenames unique", False, str(exc))
            failed = True
        missing = [f for _, f in manifest.images if f not in names]
        if check("all listed images present", not missing, f"missing {missing[:3]}"):
            sizes = set()
            bad = None
            for _, fname in manifest.images:
                try:
                    w, h = png_dimensions(zf.read(fname))
                except Exception:
                    bad = f"{fname} is not a readable PNG"
                    break
                if w != h:
                    bad = f"{fname} is {w}x{h}, not square"
                    break
                sizes.add(w)
            if bad is None and len(sizes) > 1:
                bad = f"mixed resolutions {sorted(sizes)}"
            if not check("images square with uniform resolution", bad is None, bad or ""):
                failed = True
        else:
            failed = True

    for label, ok, detail in checks:
        mark = "ok" if ok else "FAIL"
        suffix = f"  ({detail})" if detail and not ok else ""
        print(f"[{mark:>4}] {label}{suffix}")
    if failed:
        print(f"{path}: INVALID", file=sys.stderr)
        return 1
    print(f"{path}: valid ({len(manifest.images)} images)")
    return 0


def _build_config(args) -> StaircaseConfig:
    return StaircaseConfig(
        d0=args.d0,
        gamma=args.gamma,
        p_equal=args.p_equal,
        decrement=args.decrement,
        t_max=args.t_max,
        trials_per_glyph=args.trials,
        rng_seed=args.session_seed,
    )


def _cmd_simulate(args) -> int:
    targets = {}
    try:
        for token in args.glyphs.split(","):
            token = token.strip()
            if not token:
                continue
            if token.endswith(".mglyph") or "/" in token:
                archive = import_archive(token)
                targets[archive.manifest.short_name] = archive
            else:
                design = find_design(token)
                targets[design.short_name] = design
    except (KeyError, ExchangeError, OSError) as exc:
        print(f"cannot load glyphs: {exc}", file=sys.stderr)
        return 2
    if not targets:
        print("no glyphs given", file=sys.stderr)
        return 2
    try:
        observer = ObserverModel(
            kind=args.observer,
            sigma=args.sigma,
            tau=args.tau,
            weber_k=args.weber_k,
            rng_seed=args.seed,
        )
        config = _build_config(args)
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2

    result = run_session(targets, observer, config)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records_path = out_dir / "records.jsonl"
    with open(records_path, "w", encoding="utf-8") as fh:
        for record in result.records:
            fh.write(json.dumps(record.to_json_dict()) + "\n")
    scores_path = out_dir / "scores.json"
    scores_path.write_text(
        json.dumps(
            {gid: score_to_json_dict(s) for gid, s in result.scores.items()}, indent=1
        )
        + "\n"
    )
    for gid in sorted(result.scores):
        s = result.scores[gid]
        n = sum(1 for r in result.records if r.glyph_id == gid)
        acc = sum(1 for r in result.records if r.glyph_id == gid and r.correct) / n
        print(
            f"{gid}: trials={n} accuracy={acc:.3f} auc={s.auc:.3f} "
            f"R={s.resolution:.2f} D={s.jnd_distance:.3f}"
        )
    print(f"wrote {records_path} and {scores_path}")
    return 0


def _cmd_score(args) -> int:
    path = Path(args.records)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return 3
    records = []
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            records.append(TrialRecord.from_json_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            print(f"bad record at line {i + 1}: {exc}", file=sys.stderr)
            return 3
    config = _build_config(args)
    glyph_ids = [args.glyph] if args.glyph else sorted({r.glyph_id for r in records})
    if not glyph_ids:
        print("no records to score", file=sys.stderr)
        return 3
    outputs = []
    for gid in glyph_ids:
        outputs.append(export_curve(score(records, gid, config), fmt=args.format))
    text = "\n".join(outputs)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return 3
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    try:
        host, port_text = args.listen.rsplit(":", 1)
        port = int(port_text)
    except ValueError:
        print(f"--listen must look like host:port, got {args.listen!r}", file=sys.stderr)
        return 2
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        print(f"cannot listen on {args.listen}: {exc}", file=sys.stderr)
        return 4
    finally:
        probe.close()
    app = create_app(args.data_dir, seed=args.seed, static_dir=args.static)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


# -- parser ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glyphlab",
        description="Design, exchange and psychophysically evaluate scalar glyphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gallery", help="list bundled glyph designs").set_defaults(
        func=_cmd_gallery
    )

    p = sub.add_parser("export", help="render a bundled design into an .mglyph archive")
    p.add_argument("--glyph", required=True, help="short name of a gallery design")
    p.add_argument("--out", required=True, help="output .mglyph path")
    p.add_argument("--samples", type=int, default=10001, help="number of x samples")
    p.add_argument("--ppi", type=int, default=500, help="image resolution in pixels")
    p.add_argument("--author", default=None)
    p.add_argument("--email", default=None)
    p.add_argument("--set-version", default=None, help="version string for the manifest")
    p.add_argument(
        "--creation-time",
        default=None,
        help="fixed manifest timestamp (YYYY-MM-DD HH:MM:SS.ffffff); default now",
    )
    p.add_argument("--workers", type=int, default=None, help="render threads")
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("validate", help="check an .mglyph archive")
    p.add_argument("archive", help="path to the archive")
    p.set_defaults(func=_cmd_validate)

    def add_config_flags(p):
        p.add_argument("--trials", type=int, default=177, help="trials per glyph")
        p.add_argument("--d0", type=float, default=20.0)
        p.add_argument("--gamma", type=float, default=0.7)
        p.add_argument("--p-equal", type=float, default=1.0 / 3.0)
        p.add_argument("--decrement", type=int, default=3)
        p.add_argument("--t-max", type=int, default=19)
        p.add_argument("--session-seed", type=int, default=0, help="trial stream seed")

    p = sub.add_parser("simulate", help="run a simulated observer through a session")
    p.add_argument(
        "--glyphs",
        required=True,
        help="comma-separated gallery names and/or .mglyph paths",
    )
    p.add_argument(
        "--observer",
        default="noisy",
        choices=("perfect", "random", "noisy", "weber"),
    )
    p.add_argument("--sigma", type=float, default=0.0, help="perceptual noise std")
    p.add_argument("--tau", type=float, default=0.0, help="equality band width")
    p.add_argument("--weber-k", type=float, default=0.0, help="noise per unit x")
    p.add_argument("--seed", type=int, default=0, help="observer rng seed")
    add_config_flags(p)
    p.add_argument("--out", default="./glyphlab-sim", help="output directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("score", help="recompute metrics from a records.jsonl file")
    p.add_argument("--records", required=True, help="path to records.jsonl")
    p.add_argument("--glyph", default=None, help="score only this glyph id")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--out", default=None, help="output file (default stdout)")
    add_config_flags(p)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument(
        "--data-dir",
        default=None,
        help=f"data directory (default ${ENV_DATA_DIR} or ./mglyph-data)",
    )
    p.add_argument("--listen", default="127.0.0.1:8000", help="host:port to bind")
    p.add_argument("--static", default=None, help="directory of web UI files to serve")
    p.add_argument("--seed", type=int, default=0, help="base seed for session streams")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve" and args.data_dir is None:
        args.data_dir = _default_data_dir()
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
