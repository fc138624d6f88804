from pathlib import Path
from xml.etree import ElementTree

import pytest
from hypothesis import given, settings, strategies as st

from rave.errors import CxmlError
from rave.model import (
    Collection,
    CollectionItem,
    FacetDefinition,
    FacetKind,
)
from rave.pivot import (
    CXML_ELEMENTS,
    emit_cxml,
    parse_cxml,
    thumbnail_ref_for,
)

DATA = Path(__file__).parent / "data"


def _collection(items_spec, facets=None, title="test"):
    facets = facets if facets is not None else (
        FacetDefinition("Worker", FacetKind.STRING, "worker_id"),
        FacetDefinition("WorkTime", FacetKind.NUMBER, "work_time"),
    )
    items = tuple(
        CollectionItem(
            item_id=i,
            name=name,
            description=desc,
            image_ref=f"images/{i}.svg",
            thumbnail_ref=f"images/{i}_tb.svg",
            facet_values=values,
            record_id=i,
        )
        for i, (name, desc, values) in enumerate(items_spec)
    )
    return Collection(title=title, facets=facets, items=items)


SAMPLE = _collection(
    [
        ("youtube", "worker 1, answer A", {"Worker": "1", "WorkTime": 19.0}),
        ("selena gomez", "worker 4, answer B", {"Worker": "4", "WorkTime": 37.0}),
    ]
)


class TestEmit:
    def test_structure_matches_dialect(self):
        text = emit_cxml(SAMPLE)
        root = ElementTree.fromstring(text)
        assert root.tag == "Collection"
        assert root.get("Name") == "test"
        assert root.get("SchemaVersion") == "1.0"
        categories = root.find("FacetCategories")
        assert [c.get("Name") for c in categories] == ["Worker", "WorkTime"]
        assert [c.get("Type") for c in categories] == ["String", "Number"]
        items = root.find("Items")
        first = items[0]
        assert first.get("Id") == "0"
        assert first.get("Name") == "youtube"
        assert first.get("Img") == "images/0.svg"
        assert first.find("Description").text == "worker 1, answer A"
        facet_els = first.find("Facets")
        assert [f.get("Name") for f in facet_els] == ["Worker", "WorkTime"]
        assert facet_els[0].find("String").get("Value") == "1"
        assert facet_els[1].find("Number").get("Value") == "19"

    def test_element_vocabulary(self):
        text = emit_cxml(SAMPLE)
        tags = {el.tag for el in ElementTree.fromstring(text).iter()}
        assert tags == CXML_ELEMENTS

    def test_empty_collection(self):
        empty = Collection(title="empty", facets=SAMPLE.facets, items=())
        root = ElementTree.fromstring(emit_cxml(empty))
        assert len(root.find("FacetCategories")) == 2
        assert len(root.find("Items")) == 0

    def test_escaping_round_trips(self):
        tricky = _collection(
            [("a&b <c> \"d\"", "x & y", {"Worker": "<&>\"", "WorkTime": 1.5})],
            title="A&B",
        )
        text = emit_cxml(tricky)
        assert "&amp;" in text
        parsed = parse_cxml(text)
        assert parsed.title == "A&B"
        assert parsed.items[0].facet_values["Worker"] == "<&>\""

    def test_one_element_per_line_two_space_indent(self):
        lines = emit_cxml(SAMPLE).splitlines()
        assert lines[0] == '<?xml version="1.0" encoding="utf-8"?>'
        assert lines[2] == "  <FacetCategories>"
        assert all(line.count("<") <= 2 for line in lines[1:])  # open+close max

    def test_control_characters_fail_loud(self):
        bad = _collection([("name\x07", "d", {"Worker": "1", "WorkTime": 1.0})])
        with pytest.raises(CxmlError, match="cannot represent"):
            emit_cxml(bad)

    def test_stable_output(self):
        assert emit_cxml(SAMPLE) == emit_cxml(SAMPLE)


class TestParse:
    def test_two_item_sample_document(self):
        collection = parse_cxml((DATA / "two_item_sample.cxml").read_text(encoding="utf-8"))
        assert len(collection.items) == 2
        assert len(collection.facets) == 3
        assert collection.items[0].facet_values["Worker"] == "4"
        assert collection.items[1].facet_values["Answer"] == "Same"
        # shared image is allowed; thumbnail inferred by naming rule
        assert collection.items[0].image_ref == "Selena_GomezB.png"
        assert collection.items[0].thumbnail_ref == "Selena_GomezB_tb.png"

    def test_missing_items_element(self):
        text = (
            '<?xml version="1.0"?><Collection Name="x">'
            "<FacetCategories/></Collection>"
        )
        with pytest.raises(CxmlError, match="missing Items"):
            parse_cxml(text)

    def test_unknown_element_reports_path(self):
        text = (
            '<?xml version="1.0"?><Collection Name="x"><FacetCategories/>'
            "<Items><Widget/></Items></Collection>"
        )
        with pytest.raises(CxmlError, match=r"Collection/Items.*Widget"):
            parse_cxml(text)

    def test_missing_attribute_reported(self):
        text = (
            '<?xml version="1.0"?><Collection Name="x"><FacetCategories>'
            '<FacetCategory Name="W"/></FacetCategories><Items/></Collection>'
        )
        with pytest.raises(CxmlError, match="Type"):
            parse_cxml(text)

    def test_not_xml(self):
        with pytest.raises(CxmlError, match="not well-formed"):
            parse_cxml("this is not xml")

    def test_undeclared_facet_rejected(self):
        text = emit_cxml(SAMPLE).replace('<Facet Name="Worker">', '<Facet Name="Ghost">', 1)
        with pytest.raises(CxmlError, match="Ghost"):
            parse_cxml(text)

    def test_kind_mismatch_rejected(self):
        text = emit_cxml(SAMPLE).replace(
            '<String Value="1"/>', '<Number Value="1"/>', 1
        )
        with pytest.raises(CxmlError, match="declared String but holds Number"):
            parse_cxml(text)


class TestRoundTrip:
    def test_golden_file(self, sixrows_collection):
        golden = (DATA / "sixrows_golden.cxml").read_text(encoding="utf-8")
        assert emit_cxml(sixrows_collection) == golden
        assert parse_cxml(golden) == sixrows_collection

    def test_identity_on_sample(self):
        assert parse_cxml(emit_cxml(SAMPLE)) == SAMPLE

    def test_identity_on_sixrows(self, sixrows_collection):
        parsed = parse_cxml(emit_cxml(sixrows_collection))
        assert parsed == sixrows_collection

    def test_thumbnail_rule(self):
        assert thumbnail_ref_for("images/0.svg") == "images/0_tb.svg"
        assert thumbnail_ref_for("a.b/c.png") == "a.b/c_tb.png"
        assert thumbnail_ref_for("plain") == "plain_tb"


# Property: parse(emit(c)) == c over generated collections.

_xml_text = st.text(
    alphabet=st.characters(
        blacklist_categories=("Cs",),
        blacklist_characters="".join(
            [chr(c) for c in range(0x20) if chr(c) not in "\t\n\r"]
        )
        + "￾￿",
    ),
    max_size=25,
)
_facet_names = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd")), min_size=1, max_size=12
)


@st.composite
def _collections(draw):
    names = draw(st.lists(_facet_names, min_size=0, max_size=5, unique=True))
    facets = tuple(
        FacetDefinition(name, draw(st.sampled_from(list(FacetKind)))) for name in names
    )
    count = draw(st.integers(min_value=0, max_value=6))
    items = []
    for item_id in range(count):
        values: dict = {}
        for facet in facets:
            if facet.kind is FacetKind.NUMBER:
                values[facet.name] = draw(
                    st.floats(allow_nan=False, allow_infinity=False, width=64)
                )
            else:
                values[facet.name] = draw(_xml_text)
        items.append(
            CollectionItem(
                item_id=item_id,
                name=draw(_xml_text),
                description=draw(_xml_text),
                image_ref=f"images/{item_id}.svg",
                thumbnail_ref=f"images/{item_id}_tb.svg",
                facet_values=values,
                record_id=item_id,
            )
        )
    return Collection(title=draw(_xml_text), facets=facets, items=tuple(items))


@settings(max_examples=200, deadline=None)
@given(_collections())
def test_roundtrip_identity_property(collection):
    assert parse_cxml(emit_cxml(collection)) == collection
