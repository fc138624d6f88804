"""Command-line interface for the assessment exploration pipeline.

    rave ingest   --config cfg.json --input results.tsv --out records.json
    rave annotate --in records.json --out records.json [--gazetteer DIR]
    rave analyze  --in records.json --report report.json [--summary DIR]
    rave render   --serps serps.json --out images/
    rave emit pivot  --collection DIR --out collection.cxml
    rave emit bundle --records records.json --images DIR --out bundle/
    rave serve    --bundle bundle/ [--port N]

``serps.json`` maps record ids to pages: ``{"0": {"query": "...",
"results": [{"rank": 1, "title": "...", "url": "...", "snippet": "..."}]}}``
(``rank`` defaults to the list position).  ``emit pivot`` reads a collection
directory: ``records.json`` plus an ``images/`` directory holding
``{record_id}.svg`` / ``{record_id}_tb.svg`` pairs, the layout the ingest,
annotate, and render steps produce.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .analytics import compute_report, report_to_obj
from .annotate import Gazetteer, annotate_records
from .errors import DatasetError, RaveError, ServeError
from .exhibit import export_bundle
from .ingest import parse_config, parse_results
from .model import (
    AssessmentRecord,
    Collection,
    SerpContent,
    SerpResult,
    build_collection,
    default_facets,
)
from .pivot import emit_cxml
from .render import find_image_pairs, render_dataset
from .serialization import canonical_json, records_from_json, records_to_json
from .server import ServerConfig, serve

DEFAULT_GAZETTEER = Path(__file__).parent / "data" / "gazetteer"
DEFAULT_PORT = 8080


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rave", description="Faceted exploration pipeline for A-B assessment results."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="parse a results table into records.json")
    ingest.add_argument("--config", required=True, help="column-mapping JSON file")
    ingest.add_argument("--input", required=True, help="delimited results table")
    ingest.add_argument("--out", required=True, help="records.json to write")
    ingest.set_defaults(func=cmd_ingest)

    annotate = commands.add_parser("annotate", help="recompute query annotations")
    annotate.add_argument(
        "--gazetteer",
        default=str(DEFAULT_GAZETTEER),
        help="gazetteer directory (default: the built-in one)",
    )
    annotate.add_argument("--in", dest="in_path", required=True, help="records.json to read")
    annotate.add_argument("--out", required=True, help="records.json to write")
    annotate.set_defaults(func=cmd_annotate)

    analyze = commands.add_parser("analyze", help="aggregate labels, workers, rankers")
    analyze.add_argument("--in", dest="in_path", required=True, help="records.json to read")
    analyze.add_argument("--report", required=True, help="report JSON to write")
    analyze.add_argument(
        "--summary", help="also write TSV tables and charts into this directory"
    )
    analyze.set_defaults(func=cmd_analyze)

    render = commands.add_parser("render", help="render debranded result pages")
    render.add_argument("--serps", required=True, help="serps.json (record id -> page)")
    render.add_argument("--out", required=True, help="directory for SVG images")
    render.set_defaults(func=cmd_render)

    emit = commands.add_parser("emit", help="compile collections into output formats")
    emitters = emit.add_subparsers(dest="format", required=True)
    pivot = emitters.add_parser("pivot", help="emit a CXML collection file")
    pivot.add_argument(
        "--collection", required=True, help="collection directory (records.json + images/)"
    )
    pivot.add_argument("--out", required=True, help=".cxml file to write")
    pivot.add_argument("--title", default="Assessment collection")
    pivot.set_defaults(func=cmd_emit_pivot)
    bundle = emitters.add_parser("bundle", help="export the full deployable bundle")
    bundle.add_argument("--records", required=True, help="records.json to read")
    bundle.add_argument("--images", required=True, help="directory with rendered images")
    bundle.add_argument("--out", required=True, help="bundle directory to write")
    bundle.add_argument("--title", default="Assessment collection")
    bundle.set_defaults(func=cmd_emit_bundle)

    server = commands.add_parser("serve", help="serve a bundle over HTTP")
    server.add_argument("--bundle", required=True, help="bundle directory")
    server.add_argument(
        "--port", type=int, help=f"port (default: $RAVE_PORT or {DEFAULT_PORT})"
    )
    server.add_argument("--host", default="127.0.0.1")
    server.add_argument("--cors", help="Access-Control-Allow-Origin value")
    server.add_argument("--ui", help="directory of UI assets overlaid on the bundle")
    server.set_defaults(func=cmd_serve)

    return parser


def cmd_ingest(args: argparse.Namespace) -> int:
    mapping = parse_config(Path(args.config).read_text(encoding="utf-8"))
    records, report = parse_results(Path(args.input).read_bytes(), mapping)
    Path(args.out).write_text(records_to_json(records), encoding="utf-8")
    total = report.accepted + len(report.rejected)
    print(f"accepted {report.accepted} of {total} data rows", file=sys.stderr)
    for row, reason in report.rejected:
        print(f"  rejected row {row}: {reason}", file=sys.stderr)
    for worker_id, query in report.duplicate_assignments:
        print(
            f"  duplicate assignment: worker {worker_id!r} on query {query!r}",
            file=sys.stderr,
        )
    return 0


def cmd_annotate(args: argparse.Namespace) -> int:
    gazetteer = Gazetteer.from_dir(args.gazetteer)
    records = records_from_json(Path(args.in_path).read_text(encoding="utf-8"))
    annotated = annotate_records(records, gazetteer)
    Path(args.out).write_text(records_to_json(annotated), encoding="utf-8")
    print(f"annotated {len(annotated)} records", file=sys.stderr)
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    records = records_from_json(Path(args.in_path).read_text(encoding="utf-8"))
    report = compute_report(records)
    Path(args.report).write_text(canonical_json(report_to_obj(report)), encoding="utf-8")
    if args.summary:
        from .figures import write_summary  # matplotlib import is slow; defer it

        written = write_summary(report, args.summary)
        print(f"wrote {len(written)} summary files to {args.summary}", file=sys.stderr)
    print(
        f"report: {len(report.units)} units, {len(report.workers)} workers",
        file=sys.stderr,
    )
    return 0


def _load_serps(path: Path) -> dict[int, SerpContent]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DatasetError(f"serps file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DatasetError("serps file must map record ids to pages")
    serps: dict[int, SerpContent] = {}
    for key, page in data.items():
        try:
            record_id = int(key)
            results = [
                SerpResult(
                    rank=entry.get("rank", position),
                    title=entry.get("title", ""),
                    url=entry.get("url", ""),
                    snippet=entry.get("snippet", ""),
                )
                for position, entry in enumerate(page["results"], start=1)
            ]
            serps[record_id] = SerpContent(query=page["query"], results=tuple(results))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise DatasetError(f"serps entry {key!r}: {exc}") from None
    return serps


def cmd_render(args: argparse.Namespace) -> int:
    serps = _load_serps(Path(args.serps))
    index = render_dataset(serps, args.out)
    print(f"rendered {len(index)} pages into {args.out}", file=sys.stderr)
    return 0


def _collection_from_dir(path: Path, title: str) -> Collection:
    records_file = path / "records.json"
    if not records_file.is_file():
        raise DatasetError(
            f"{path} is not a collection directory (expected records.json and images/)"
        )
    records = records_from_json(records_file.read_text(encoding="utf-8"))
    return _collection_from_parts(records, path / "images", title)


def _collection_from_parts(
    records: list[AssessmentRecord], images_dir: Path, title: str
) -> Collection:
    pairs = find_image_pairs([r.record_id for r in records], images_dir)
    index = {rid: (pair.image_ref, pair.thumbnail_ref) for rid, pair in pairs.items()}
    return build_collection(records, default_facets(), index, title=title)


def cmd_emit_pivot(args: argparse.Namespace) -> int:
    collection = _collection_from_dir(Path(args.collection), args.title)
    Path(args.out).write_text(emit_cxml(collection), encoding="utf-8")
    print(f"wrote {args.out} ({len(collection.items)} items)", file=sys.stderr)
    return 0


def cmd_emit_bundle(args: argparse.Namespace) -> int:
    records = records_from_json(Path(args.records).read_text(encoding="utf-8"))
    collection = _collection_from_parts(records, Path(args.images), args.title)
    report = compute_report(records)
    manifest = export_bundle(collection, report, args.out)
    print(
        f"exported bundle to {args.out} ({manifest['item_count']} items, "
        f"{len(manifest['files'])} files)",
        file=sys.stderr,
    )
    return 0


def resolve_port(requested: int | None) -> int:
    """The port to bind: --port wins, then $RAVE_PORT, then the default."""
    if requested is not None:
        return requested
    env_port = os.environ.get("RAVE_PORT", "")
    if not env_port:
        return DEFAULT_PORT
    try:
        return int(env_port)
    except ValueError:
        raise ServeError(f"RAVE_PORT={env_port!r} is not a port number") from None


def cmd_serve(args: argparse.Namespace) -> int:
    config = ServerConfig(
        bundle_dir=Path(args.bundle),
        port=resolve_port(args.port),
        host=args.host,
        cors_origin=args.cors,
        ui_dir=Path(args.ui) if args.ui else None,
    )
    serve(config)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    try:
        return args.func(args)
    except RaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
