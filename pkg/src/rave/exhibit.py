"""Exhibit-style bundle emission: JSON data file, HTML shell, full export.

The data contract is a strict-JSON object with ``types`` (a single ``Item``
type with pluralLabel ``Items``) and ``items`` (one object per collection
item carrying ``type``, ``label``, one key per facet, ``image``, and
``thumbnail``).  Facet keys are the display names lowercased with
whitespace removed ("Query Type" -> "querytype").

``export_bundle`` writes the whole deployable directory: collection.cxml,
exhibit.json, index.html, analytics.json, copied images, and a manifest.
Two runs over identical inputs produce byte-identical non-image files.
"""

from __future__ import annotations

import html
import os
import shutil
from dataclasses import replace
from pathlib import Path
from typing import Any

from .analytics import AnalyticsReport, report_to_obj
from .errors import BundleError, ExhibitError
from .model import Collection
from .pivot import emit_cxml
from .serialization import canonical_json, json_number

RESERVED_ITEM_KEYS = ("type", "label", "image", "thumbnail")


def facet_key(name: str) -> str:
    """Exhibit item key for a facet display name: lowercase, no whitespace."""
    return "".join(name.lower().split())


def _facet_keys(collection: Collection) -> dict[str, str]:
    keys: dict[str, str] = {}
    for facet in collection.facets:
        key = facet_key(facet.name)
        if key in RESERVED_ITEM_KEYS:
            raise ExhibitError(
                f"facet '{facet.name}' collides with reserved item key '{key}'"
            )
        if key in keys:
            raise ExhibitError(
                f"facets '{keys[key]}' and '{facet.name}' collide on item key '{key}'"
            )
        keys[key] = facet.name
    return keys


def emit_exhibit_json(collection: Collection) -> str:
    """Serialize a collection to the Exhibit JSON data file."""
    _facet_keys(collection)
    items: list[dict[str, Any]] = []
    for item in collection.items:
        obj: dict[str, Any] = {"type": "Item", "label": item.name}
        for facet in collection.facets:
            value = item.facet_values[facet.name]
            obj[facet_key(facet.name)] = (
                json_number(value) if isinstance(value, float) else value
            )
        obj["image"] = item.image_ref
        obj["thumbnail"] = item.thumbnail_ref
        items.append(obj)
    return canonical_json({"types": {"Item": {"pluralLabel": "Items"}}, "items": items})


_PAGE_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>{title}</title>
<link rel="exhibit-data" href="exhibit.json">
<link rel="stylesheet" href="ui/explorer.css">
</head>
<body>
<header class="app-header"><h1>{title}</h1><nav id="view-tabs"></nav></header>
<main class="explorer">
<aside id="facet-sidebar" class="facet-sidebar">
{facet_sections}</aside>
<section id="item-grid" class="item-grid" data-source="exhibit.json"></section>
<section id="charts" class="charts" hidden></section>
</main>
<div id="item-detail" class="item-detail" hidden></div>
<script type="module" src="ui/explorer.js"></script>
</body>
</html>
"""


def emit_exhibit_html(collection: Collection) -> str:
    """Static layout page: data-file reference, facet sidebar, item grid.

    The page holds no inline data; the data lives only in exhibit.json.
    """
    sections = []
    for facet in collection.facets:
        escaped = html.escape(facet.name, quote=True)
        sections.append(
            f'<section class="facet" data-facet="{escaped}">'
            f"<h2>{html.escape(facet.name)}</h2>"
            f'<ul class="facet-values"></ul></section>\n'
        )
    return _PAGE_TEMPLATE.format(
        title=html.escape(collection.title), facet_sections="".join(sections)
    )


def _stage_image(ref: str, out: Path, copied: dict[str, str]) -> str:
    source = Path(ref)
    if not source.is_file():
        raise BundleError(f"image file not found: {source}")
    base = source.name
    previous = copied.get(base)
    resolved = str(source.resolve())
    if previous is not None:
        if previous != resolved:
            raise BundleError(f"image name collision on '{base}'")
        return f"images/{base}"
    destination = out / "images" / base
    try:
        shutil.copyfile(source, destination)
    except OSError as exc:
        raise BundleError(f"cannot copy {source} to {destination}: {exc}") from None
    copied[base] = resolved
    return f"images/{base}"


def _write_file(path: Path, blob: bytes) -> None:
    try:
        path.write_bytes(blob)
    except OSError as exc:
        raise BundleError(f"cannot write {path}: {exc}") from None


def export_bundle(
    collection: Collection, report: AnalyticsReport, out_dir: str | Path
) -> dict[str, Any]:
    """Write the deployable bundle directory and return its manifest.

    The manifest lists every written file (except itself) with byte sizes.
    Item image references are rewritten to ``images/<name>`` so the bundle
    is self-contained for both static use and the HTTP server.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "images").mkdir(exist_ok=True)
    except OSError as exc:
        raise BundleError(f"cannot create bundle directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise BundleError(f"bundle directory {out} is not writable")

    copied: dict[str, str] = {}
    staged_items = []
    for item in collection.items:
        staged_items.append(
            replace(
                item,
                image_ref=_stage_image(item.image_ref, out, copied),
                thumbnail_ref=_stage_image(item.thumbnail_ref, out, copied),
            )
        )
    staged = Collection(
        title=collection.title, facets=collection.facets, items=tuple(staged_items)
    )

    files = {
        "collection.cxml": emit_cxml(staged).encode("utf-8"),
        "exhibit.json": emit_exhibit_json(staged).encode("utf-8"),
        "index.html": emit_exhibit_html(staged).encode("utf-8"),
        "analytics.json": canonical_json(report_to_obj(report)).encode("utf-8"),
    }
    for name, blob in files.items():
        _write_file(out / name, blob)

    entries = [{"path": name, "bytes": len(blob)} for name, blob in files.items()]
    for base in copied:
        entries.append({"path": f"images/{base}", "bytes": (out / "images" / base).stat().st_size})
    entries.sort(key=lambda entry: entry["path"])
    manifest = {
        "title": staged.title,
        "item_count": len(staged.items),
        "files": entries,
    }
    _write_file(out / "manifest.json", canonical_json(manifest).encode("utf-8"))
    return manifest
