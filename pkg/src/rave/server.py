"""Read-only HTTP service over an exported bundle.

Endpoints (all GET):

* ``/api/collection``          exhibit.json, verbatim
* ``/api/facets?Facet=value``  per-facet value counts under the selection
* ``/api/items?Facet=value``   items matching the selection
* ``/api/analytics/workers``   worker summaries
* ``/api/analytics/rankers``   ranker preference report
* ``/api/analytics/units``     per-query vote summaries
* ``/images/<name>``           bundle image
* ``/`` and other paths        index.html and bundle-relative assets

Repeated query keys are within-facet disjunction (``?Answer=A&Answer=Same``);
facet names resolve case-insensitively when unambiguous.  The bundle is
loaded once into an immutable snapshot, so responses are byte-deterministic
for a fixed bundle and query, and concurrent requests share nothing mutable.
"""

from __future__ import annotations

import json
import logging
import urllib.parse
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any

from .analytics import FacetSelection, apply_selection, facet_counts
from .errors import MalformedQueryError, ServeError, UnknownFacetError
from .model import Collection, CollectionItem, FacetKind, number_token
from .pivot import parse_cxml
from .serialization import canonical_json, json_number

logger = logging.getLogger(__name__)

MEDIA_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".cxml": "application/xml; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".css": "text/css; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".ico": "image/x-icon",
}


@dataclass(frozen=True)
class ServerConfig:
    """Where to bind and which bundle to load."""

    bundle_dir: Path
    port: int = 8080
    host: str = "127.0.0.1"
    cors_origin: str | None = None
    ui_dir: Path | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "bundle_dir", Path(self.bundle_dir))
        if self.ui_dir is not None:
            object.__setattr__(self, "ui_dir", Path(self.ui_dir))
        if not 1 <= self.port <= 65535:
            raise ServeError(f"port {self.port} is not in 1..65535")
        if not self.bundle_dir.is_dir():
            raise ServeError(f"bundle directory {self.bundle_dir} does not exist")
        if not (self.bundle_dir / "manifest.json").is_file():
            raise ServeError(
                f"{self.bundle_dir} holds no manifest.json; not an export bundle"
            )


@dataclass(frozen=True)
class BundleSnapshot:
    """Everything the handlers read; immutable after startup."""

    collection: Collection
    analytics: dict[str, Any]
    exhibit_json: bytes
    bundle_dir: Path
    ui_dir: Path | None


def load_snapshot(config: ServerConfig) -> BundleSnapshot:
    base = config.bundle_dir
    try:
        collection = parse_cxml((base / "collection.cxml").read_text(encoding="utf-8"))
        exhibit_json = (base / "exhibit.json").read_bytes()
        analytics = json.loads((base / "analytics.json").read_text(encoding="utf-8"))
    except OSError as exc:
        raise ServeError(f"cannot load bundle {base}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ServeError(f"bundle analytics.json is not valid JSON: {exc}") from None
    return BundleSnapshot(
        collection=collection,
        analytics=analytics,
        exhibit_json=exhibit_json,
        bundle_dir=base,
        ui_dir=config.ui_dir,
    )


def item_payload(item: CollectionItem) -> dict[str, Any]:
    facets = {
        name: json_number(value) if isinstance(value, float) else value
        for name, value in item.facet_values.items()
    }
    return {
        "id": item.item_id,
        "name": item.name,
        "description": item.description,
        "image": item.image_ref,
        "thumbnail": item.thumbnail_ref,
        "facets": facets,
    }


def items_payload(collection: Collection, selection: FacetSelection) -> list[dict]:
    """The /api/items response body for a selection."""
    return [item_payload(item) for item in apply_selection(collection, selection)]


def facets_payload(collection: Collection, selection: FacetSelection) -> dict:
    """The /api/facets response body: per-facet value counts."""
    payload: dict[str, dict[str, int]] = {}
    for facet in collection.facets:
        counts = facet_counts(collection, selection, facet.name)
        payload[facet.name] = {
            (number_token(value) if isinstance(value, float) else value): count
            for value, count in counts.items()
        }
    return payload


def selection_from_query(collection: Collection, raw_query: str) -> FacetSelection:
    """Decode a URL query string into a facet selection.

    Facet names match exactly or, failing that, case-insensitively when the
    fold is unambiguous.  Values for number facets must parse as numbers.
    """
    exact = set(collection.facet_names)
    folded: dict[str, str | None] = {}
    for name in exact:
        fold = name.casefold()
        folded[fold] = None if fold in folded else name
    kinds = {facet.name: facet.kind for facet in collection.facets}

    chosen: dict[str, set] = {}
    for key, value in urllib.parse.parse_qsl(raw_query, keep_blank_values=True):
        if key in exact:
            name = key
        else:
            match = folded.get(key.casefold())
            if match is None:
                raise UnknownFacetError(f"unknown facet {key!r}")
            name = match
        if kinds[name] is FacetKind.NUMBER:
            try:
                converted: str | float = float(value)
            except ValueError:
                raise MalformedQueryError(
                    f"facet {name!r} expects a numeric value, got {value!r}"
                ) from None
        else:
            converted = value
        chosen.setdefault(name, set()).add(converted)
    return FacetSelection(chosen)


class _Handler(BaseHTTPRequestHandler):
    server_version = "rave/0.1"
    protocol_version = "HTTP/1.1"
    snapshot: BundleSnapshot  # bound onto the subclass by make_server
    cors_origin: str | None = None

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        try:
            self._route()
        except UnknownFacetError as exc:
            self._send_json(400, {"error": "unknown facet", "detail": str(exc)})
        except MalformedQueryError as exc:
            self._send_json(400, {"error": "malformed query", "detail": str(exc)})
        except (BrokenPipeError, ConnectionResetError):
            pass
        except Exception as exc:  # pragma: no cover - defensive
            logger.exception("request %s failed", self.path)
            self._send_json(500, {"error": "internal error", "detail": str(exc)})

    def _route(self) -> None:
        parsed = urllib.parse.urlsplit(self.path)
        path = parsed.path
        snapshot = self.snapshot
        if path == "/api/collection":
            self._send_bytes(200, snapshot.exhibit_json, MEDIA_TYPES[".json"])
        elif path == "/api/items":
            selection = selection_from_query(snapshot.collection, parsed.query)
            self._send_json(200, items_payload(snapshot.collection, selection))
        elif path == "/api/facets":
            selection = selection_from_query(snapshot.collection, parsed.query)
            self._send_json(200, facets_payload(snapshot.collection, selection))
        elif path == "/api/analytics/workers":
            self._send_json(200, snapshot.analytics.get("workers", []))
        elif path == "/api/analytics/rankers":
            self._send_json(200, snapshot.analytics.get("rankers", {}))
        elif path == "/api/analytics/units":
            self._send_json(200, snapshot.analytics.get("units", []))
        elif path.startswith("/api/"):
            self._send_json(404, {"error": "not found", "detail": path})
        elif path.startswith("/images/"):
            self._send_file(snapshot.bundle_dir / "images", path[len("/images/") :])
        else:
            name = path.lstrip("/") or "index.html"
            if snapshot.ui_dir is not None and _resolve(snapshot.ui_dir, name):
                self._send_file(snapshot.ui_dir, name)
            else:
                self._send_file(snapshot.bundle_dir, name)

    def _send_file(self, base: Path, name: str) -> None:
        resolved = _resolve(base, name)
        if resolved is None:
            self._send_json(404, {"error": "not found", "detail": name})
            return
        media_type = MEDIA_TYPES.get(resolved.suffix, "application/octet-stream")
        self._send_bytes(200, resolved.read_bytes(), media_type)

    def _send_json(self, status: int, obj: Any) -> None:
        self._send_bytes(status, canonical_json(obj).encode("utf-8"), MEDIA_TYPES[".json"])

    def _send_bytes(self, status: int, body: bytes, media_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", media_type)
        self.send_header("Content-Length", str(len(body)))
        if self.cors_origin:
            self.send_header("Access-Control-Allow-Origin", self.cors_origin)
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format: str, *args: Any) -> None:  # noqa: A002
        logger.debug("%s %s", self.address_string(), format % args)


def _resolve(base: Path, name: str) -> Path | None:
    """Resolve a request path inside ``base``; None if missing or escaping."""
    if not name:
        return None
    candidate = (base / name).resolve()
    try:
        candidate.relative_to(base.resolve())
    except ValueError:
        return None
    return candidate if candidate.is_file() else None


def make_server(config: ServerConfig) -> ThreadingHTTPServer:
    """Load the bundle and return a ready-to-run threading HTTP server."""
    snapshot = load_snapshot(config)
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"snapshot": snapshot, "cors_origin": config.cors_origin},
    )
    return ThreadingHTTPServer((config.host, config.port), handler)


def serve(config: ServerConfig) -> None:
    """Serve the bundle until interrupted."""
    server = make_server(config)
    logger.info(
        "serving %s at http://%s:%d/", config.bundle_dir, config.host, config.port
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
