"""Pivot CXML emission and strict parsing.

The dialect: a ``Collection`` root carrying ``Name`` and ``SchemaVersion``
attributes, a ``FacetCategories`` block declaring each facet's ``Name`` and
``Type`` (``String`` or ``Number``), and an ``Items`` block with one
``Item`` per collection item (``Id``, ``Name``, ``Img`` attributes, a
``Description`` child, and a ``Facets`` child holding one typed value per
declared facet).  Two-space indent, one element per line, so documents are
stable under golden-file comparison.

CXML has no slot for thumbnail paths or record links, so the parser
reconstructs both by convention: the thumbnail ref follows the pipeline's
``stem_tb.suffix`` naming rule and the record id equals the item id.
"""

from __future__ import annotations

from xml.etree import ElementTree

from .errors import CollectionError, CxmlError
from .model import (
    Collection,
    CollectionItem,
    FacetDefinition,
    FacetKind,
    number_token,
)
from .serialization import INVALID_XML_CHARS, xml_attr, xml_text

SCHEMA_VERSION = "1.0"

#: The complete element vocabulary of the dialect.
CXML_ELEMENTS = frozenset(
    {
        "Collection",
        "FacetCategories",
        "FacetCategory",
        "Items",
        "Item",
        "Description",
        "Facets",
        "Facet",
        "String",
        "Number",
    }
)

_TYPE_NAMES = {FacetKind.STRING: "String", FacetKind.NUMBER: "Number"}
_TYPE_KINDS = {name: kind for kind, name in _TYPE_NAMES.items()}


def thumbnail_ref_for(image_ref: str) -> str:
    """Thumbnail path by the pipeline naming rule: stem + "_tb" + suffix."""
    directory, slash, base = image_ref.rpartition("/")
    stem, dot, suffix = base.rpartition(".")
    base = f"{stem}_tb.{suffix}" if dot else f"{base}_tb"
    return f"{directory}{slash}{base}"


def _attr(value: str) -> str:
    if INVALID_XML_CHARS.search(value):
        raise CxmlError(f"string contains characters XML cannot represent: {value!r}")
    return xml_attr(value)


def _text(value: str) -> str:
    if INVALID_XML_CHARS.search(value):
        raise CxmlError(f"string contains characters XML cannot represent: {value!r}")
    return xml_text(value)


def emit_cxml(collection: Collection) -> str:
    """Serialize a collection to CXML text (facets first, then items)."""
    lines = ['<?xml version="1.0" encoding="utf-8"?>']
    lines.append(
        f'<Collection Name="{_attr(collection.title)}" SchemaVersion="{SCHEMA_VERSION}">'
    )
    if collection.facets:
        lines.append("  <FacetCategories>")
        for facet in collection.facets:
            lines.append(
                f'    <FacetCategory Name="{_attr(facet.name)}" '
                f'Type="{_TYPE_NAMES[facet.kind]}"/>'
            )
        lines.append("  </FacetCategories>")
    else:
        lines.append("  <FacetCategories/>")
    if collection.items:
        lines.append("  <Items>")
        for item in collection.items:
            lines.append(
                f'    <Item Id="{item.item_id}" Name="{_attr(item.name)}" '
                f'Img="{_attr(item.image_ref)}">'
            )
            if item.description:
                lines.append(f"      <Description>{_text(item.description)}</Description>")
            else:
                lines.append("      <Description/>")
            if collection.facets:
                lines.append("      <Facets>")
                for facet in collection.facets:
                    value = item.facet_values[facet.name]
                    lines.append(f'        <Facet Name="{_attr(facet.name)}">')
                    if facet.kind is FacetKind.NUMBER:
                        lines.append(f'          <Number Value="{number_token(value)}"/>')
                    else:
                        lines.append(f'          <String Value="{_attr(value)}"/>')
                    lines.append("        </Facet>")
                lines.append("      </Facets>")
            else:
                lines.append("      <Facets/>")
            lines.append("    </Item>")
        lines.append("  </Items>")
    else:
        lines.append("  <Items/>")
    lines.append("</Collection>")
    return "\n".join(lines) + "\n"


def _require_attr(element: ElementTree.Element, name: str, path: str) -> str:
    value = element.get(name)
    if value is None:
        raise CxmlError(f"{path}: missing attribute {name!r}")
    return value


def _check_attrs(element: ElementTree.Element, allowed: set[str], path: str) -> None:
    extra = set(element.attrib) - allowed
    if extra:
        raise CxmlError(f"{path}: unknown attribute(s) {', '.join(sorted(extra))}")


def _no_children(element: ElementTree.Element, path: str) -> None:
    if len(element):
        raise CxmlError(f"{path}: unexpected child element {element[0].tag!r}")


def parse_cxml(text: str) -> Collection:
    """Parse CXML back into a collection; the round-trip oracle for emit.

    Strict: unknown elements or attributes and missing required attributes
    raise :class:`CxmlError` with the element path.
    """
    try:
        root = ElementTree.fromstring(text)
    except ElementTree.ParseError as exc:
        raise CxmlError(f"not well-formed XML: {exc}") from None
    if root.tag != "Collection":
        raise CxmlError(f"root element is {root.tag!r}, expected 'Collection'")
    title = _require_attr(root, "Name", "Collection")
    _check_attrs(root, {"Name", "SchemaVersion"}, "Collection")

    categories_el = None
    items_el = None
    for child in root:
        if child.tag == "FacetCategories":
            if categories_el is not None:
                raise CxmlError("Collection: duplicate FacetCategories")
            categories_el = child
        elif child.tag == "Items":
            if items_el is not None:
                raise CxmlError("Collection: duplicate Items")
            items_el = child
        else:
            raise CxmlError(f"Collection: unknown element {child.tag!r}")
    if categories_el is None:
        raise CxmlError("Collection: missing FacetCategories")
    if items_el is None:
        raise CxmlError("Collection: missing Items")
    _check_attrs(categories_el, set(), "Collection/FacetCategories")
    _check_attrs(items_el, set(), "Collection/Items")

    facets: list[FacetDefinition] = []
    for position, element in enumerate(categories_el):
        path = f"Collection/FacetCategories/*[{position}]"
        if element.tag != "FacetCategory":
            raise CxmlError(f"{path}: unknown element {element.tag!r}")
        name = _require_attr(element, "Name", path)
        type_name = _require_attr(element, "Type", path)
        _check_attrs(element, {"Name", "Type"}, path)
        _no_children(element, path)
        if type_name not in _TYPE_KINDS:
            raise CxmlError(f"{path}: unknown Type {type_name!r}")
        facets.append(FacetDefinition(name=name, kind=_TYPE_KINDS[type_name]))
    kinds = {facet.name: facet.kind for facet in facets}

    items: list[CollectionItem] = []
    for position, element in enumerate(items_el):
        path = f"Collection/Items/*[{position}]"
        if element.tag != "Item":
            raise CxmlError(f"{path}: unknown element {element.tag!r}")
        id_text = _require_attr(element, "Id", path)
        try:
            item_id = int(id_text)
        except ValueError:
            raise CxmlError(f"{path}: Id {id_text!r} is not an integer") from None
        name = _require_attr(element, "Name", path)
        image_ref = _require_attr(element, "Img", path)
        _check_attrs(element, {"Id", "Name", "Img"}, path)

        description: str | None = None
        facets_el: ElementTree.Element | None = None
        for child in element:
            if child.tag == "Description":
                if description is not None:
                    raise CxmlError(f"{path}: duplicate Description")
                _check_attrs(child, set(), f"{path}/Description")
                _no_children(child, f"{path}/Description")
                description = child.text or ""
            elif child.tag == "Facets":
                if facets_el is not None:
                    raise CxmlError(f"{path}: duplicate Facets")
                _check_attrs(child, set(), f"{path}/Facets")
                facets_el = child
            else:
                raise CxmlError(f"{path}: unknown element {child.tag!r}")
        if description is None:
            raise CxmlError(f"{path}: missing Description")
        if facets_el is None:
            raise CxmlError(f"{path}: missing Facets")

        values: dict[str, str | float] = {}
        for facet_position, facet_el in enumerate(facets_el):
            facet_path = f"{path}/Facets/*[{facet_position}]"
            if facet_el.tag != "Facet":
                raise CxmlError(f"{facet_path}: unknown element {facet_el.tag!r}")
            facet_name = _require_attr(facet_el, "Name", facet_path)
            _check_attrs(facet_el, {"Name"}, facet_path)
            if facet_name not in kinds:
                raise CxmlError(f"{facet_path}: undeclared facet {facet_name!r}")
            if facet_name in values:
                raise CxmlError(f"{facet_path}: duplicate facet {facet_name!r}")
            children = list(facet_el)
            if len(children) != 1:
                raise CxmlError(f"{facet_path}: expected exactly one value element")
            value_el = children[0]
            value_path = f"{facet_path}/{value_el.tag}"
            expected_tag = _TYPE_NAMES[kinds[facet_name]]
            if value_el.tag != expected_tag:
                if value_el.tag in _TYPE_KINDS:
                    raise CxmlError(
                        f"{value_path}: facet {facet_name!r} is declared "
                        f"{expected_tag} but holds {value_el.tag}"
                    )
                raise CxmlError(f"{value_path}: unknown element {value_el.tag!r}")
            raw = _require_attr(value_el, "Value", value_path)
            _check_attrs(value_el, {"Value"}, value_path)
            _no_children(value_el, value_path)
            if kinds[facet_name] is FacetKind.NUMBER:
                try:
                    values[facet_name] = float(raw)
                except ValueError:
                    raise CxmlError(
                        f"{value_path}: Value {raw!r} is not a number"
                    ) from None
            else:
                values[facet_name] = raw

        items.append(
            CollectionItem(
                item_id=item_id,
                name=name,
                description=description,
                image_ref=image_ref,
                thumbnail_ref=thumbnail_ref_for(image_ref),
                facet_values=values,
                record_id=item_id,
            )
        )

    try:
        return Collection(title=title, facets=tuple(facets), items=tuple(items))
    except CollectionError as exc:
        raise CxmlError(f"document violates collection invariants: {exc}") from None
