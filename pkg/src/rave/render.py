"""Debranded result-page rendering to deterministic SVG.

Layout is fixed so A/B pages stay visually comparable: an 800-unit-wide
canvas, a 60-unit query header, and one 110-unit block per result (title
line, URL line, two snippet lines -- anything past the second snippet line
is dropped, and all text clips at the canvas edge).  Identical input
produces byte-identical output, and no engine names, logos, or other brand
chrome are ever emitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping
from xml.etree import ElementTree

from .errors import RenderError
from .model import SerpContent
from .serialization import INVALID_XML_CHARS, xml_text

CANVAS_WIDTH = 800
HEADER_HEIGHT = 60
RESULT_HEIGHT = 110
THUMBNAIL_WIDTH = 160
MARGIN = 20
SNIPPET_LINE_CHARS = 92  # greedy word-wrap budget per snippet line

# The only colors a rendered page may use.
PALETTE = {
    "background": "#ffffff",
    "frame": "#c9c9c9",
    "query": "#202020",
    "title": "#1f3d99",
    "url": "#0f7a3d",
    "snippet": "#474747",
}

# Strings that must never appear in rendered output: engine names and logo
# identifiers a debranded page cannot carry.
BRAND_DENYLIST = (
    "google",
    "bing",
    "yahoo",
    "duckduckgo",
    "baidu",
    "yandex",
    "ecosia",
    "logo",
    "trademark",
)


def find_branding(text: str) -> list[str]:
    """Deny-listed brand strings present in ``text``, case-insensitive."""
    lowered = text.lower()
    return [term for term in BRAND_DENYLIST if term in lowered]


@dataclass(frozen=True)
class ImagePair:
    """A rendered page and its thumbnail, keyed by record id."""

    record_id: int
    image_ref: str
    thumbnail_ref: str


def page_height(result_count: int) -> int:
    return HEADER_HEIGHT + RESULT_HEIGHT * result_count


def _clean(value: str) -> str:
    # Codepoints XML cannot carry are dropped rather than crashing the render.
    return INVALID_XML_CHARS.sub("", value)


def _wrap_snippet(snippet: str) -> tuple[str, str]:
    """Greedy two-line word wrap; anything past the second line is dropped."""
    lines: list[str] = []
    current = ""
    for word in snippet.split():
        word = word[:SNIPPET_LINE_CHARS]  # hard cap on pathological tokens
        extended = f"{current} {word}" if current else word
        if len(extended) <= SNIPPET_LINE_CHARS:
            current = extended
            continue
        lines.append(current)
        current = word
        if len(lines) == 2:
            break
    if len(lines) < 2:
        lines.append(current)
    while len(lines) < 2:
        lines.append("")
    return lines[0], lines[1]


def render_serp(content: SerpContent) -> str:
    """Render a hit list to a debranded SVG page.

    The document is 800 x (60 + 110*n) units for n results, carries only the
    documented palette, and is byte-identical for identical input.
    """
    height = page_height(len(content.results))
    lines = [
        '<?xml version="1.0" encoding="utf-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS_WIDTH}" '
        f'height="{height}" viewBox="0 0 {CANVAS_WIDTH} {height}">',
        "  <style>",
        f"    .query {{ font: 18px sans-serif; fill: {PALETTE['query']}; }}",
        f"    .title {{ font: 16px sans-serif; fill: {PALETTE['title']}; }}",
        f"    .url {{ font: 13px sans-serif; fill: {PALETTE['url']}; }}",
        f"    .snippet {{ font: 13px sans-serif; fill: {PALETTE['snippet']}; }}",
        "  </style>",
        "  <defs>",
        f'    <clipPath id="page"><rect x="0" y="0" width="{CANVAS_WIDTH}" '
        f'height="{height}"/></clipPath>',
        "  </defs>",
        f'  <rect width="{CANVAS_WIDTH}" height="{height}" fill="{PALETTE["background"]}"/>',
        '  <g clip-path="url(#page)">',
        f'    <rect x="{MARGIN}" y="14" width="560" height="32" rx="16" fill="none" '
        f'stroke="{PALETTE["frame"]}"/>',
        f'    <text class="query" x="{MARGIN + 16}" y="36">'
        f"{xml_text(_clean(content.query))}</text>",
        f'    <line x1="0" y1="{HEADER_HEIGHT}" x2="{CANVAS_WIDTH}" y2="{HEADER_HEIGHT}" '
        f'stroke="{PALETTE["frame"]}"/>',
    ]
    for position, result in enumerate(content.results):
        top = HEADER_HEIGHT + RESULT_HEIGHT * position
        first, second = _wrap_snippet(_clean(result.snippet))
        lines.append(
            f'    <text class="title" x="{MARGIN}" y="{top + 30}">'
            f"{xml_text(_clean(result.title))}</text>"
        )
        lines.append(
            f'    <text class="url" x="{MARGIN}" y="{top + 52}">'
            f"{xml_text(_clean(result.url))}</text>"
        )
        lines.append(
            f'    <text class="snippet" x="{MARGIN}" y="{top + 74}">{xml_text(first)}</text>'
        )
        lines.append(
            f'    <text class="snippet" x="{MARGIN}" y="{top + 92}">{xml_text(second)}</text>'
        )
    lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_SVG_ROOT = re.compile(r"<svg\b[^>]*>")
_WIDTH_ATTR = re.compile(r'(?<![-\w])width="([^"]*)"')
_HEIGHT_ATTR = re.compile(r'(?<![-\w])height="([^"]*)"')


def _parse_dimension(raw: str, name: str) -> float:
    text = raw.strip()
    if text.endswith("px"):
        text = text[:-2]
    try:
        value = float(text)
    except ValueError:
        raise RenderError(f"svg {name} {raw!r} is not a plain number") from None
    if value <= 0:
        raise RenderError(f"svg {name} must be positive")
    return value


def _dimension_token(value: float) -> str:
    return str(int(value)) if value.is_integer() else repr(value)


def make_thumbnail(full: str) -> str:
    """Scale an SVG document to a 160-unit-wide thumbnail.

    Only the root viewport changes (width fixed to 160, height scaled
    proportionally to the nearest integer, .5 rounding up); the drawing
    itself is byte-identical, so thumbnailing is idempotent on width.
    """
    try:
        root = ElementTree.fromstring(full)
    except ElementTree.ParseError as exc:
        raise RenderError(f"not a well-formed SVG document: {exc}") from None
    if root.tag not in ("svg", "{http://www.w3.org/2000/svg}svg"):
        raise RenderError("root element is not <svg>")
    for attr in ("width", "height"):
        if attr not in root.attrib:
            raise RenderError(f"svg root lacks a {attr} attribute")
    width = _parse_dimension(root.attrib["width"], "width")
    height = _parse_dimension(root.attrib["height"], "height")
    new_height = max(1, int(height * THUMBNAIL_WIDTH / width + 0.5))

    match = _SVG_ROOT.search(full)
    assert match is not None  # the document parsed, so the tag exists
    tag = match.group(0)
    tag = _WIDTH_ATTR.sub(f'width="{THUMBNAIL_WIDTH}"', tag, count=1)
    tag = _HEIGHT_ATTR.sub(f'height="{new_height}"', tag, count=1)
    if "viewBox" not in tag:
        close = -2 if tag.endswith("/>") else -1
        tag = (
            tag[:close]
            + f' viewBox="0 0 {_dimension_token(width)} {_dimension_token(height)}"'
            + tag[close:]
        )
    return full[: match.start()] + tag + full[match.end() :]


def render_dataset(
    serps: Mapping[int, SerpContent], out_dir: str | Path
) -> dict[int, ImagePair]:
    """Render every page and its thumbnail into ``out_dir``.

    Files are named ``{record_id}.svg`` and ``{record_id}_tb.svg``;
    pre-existing files are overwritten so reruns reproduce the directory.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise RenderError(f"cannot create {out}: {exc}") from None
    index: dict[int, ImagePair] = {}
    for record_id in sorted(serps):
        full = render_serp(serps[record_id])
        thumbnail = make_thumbnail(full)
        image_path = out / f"{record_id}.svg"
        thumbnail_path = out / f"{record_id}_tb.svg"
        for path, text in ((image_path, full), (thumbnail_path, thumbnail)):
            try:
                path.write_text(text, encoding="utf-8")
            except OSError as exc:
                raise RenderError(f"cannot write {path}: {exc}") from None
        index[record_id] = ImagePair(
            record_id=record_id,
            image_ref=str(image_path),
            thumbnail_ref=str(thumbnail_path),
        )
    return index


def find_image_pairs(
    record_ids: Iterable[int], images_dir: str | Path
) -> dict[int, ImagePair]:
    """Locate ``{id}.svg|.png`` and ``{id}_tb.*`` pairs for every record id."""
    base = Path(images_dir)
    index: dict[int, ImagePair] = {}
    for record_id in record_ids:
        image = _existing_image(base, str(record_id))
        thumbnail = _existing_image(base, f"{record_id}_tb")
        if image is None or thumbnail is None:
            raise RenderError(f"no image pair for record {record_id} in {base}")
        index[record_id] = ImagePair(
            record_id=record_id, image_ref=str(image), thumbnail_ref=str(thumbnail)
        )
    return index


def _existing_image(base: Path, stem: str) -> Path | None:
    for suffix in (".svg", ".png"):
        candidate = base / f"{stem}{suffix}"
        if candidate.is_file():
            return candidate
    return None
