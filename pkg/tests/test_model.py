import pytest

from rave.errors import CollectionError
from rave.model import (
    Annotations,
    AssessmentRecord,
    AssignmentMeta,
    Collection,
    CollectionItem,
    EntityKind,
    FacetDefinition,
    FacetKind,
    Label,
    QueryType,
    SerpContent,
    SerpResult,
    build_collection,
    default_facets,
    number_token,
)


def _record(record_id=0, query="youtube", doc_a="r1", doc_b="r2", label=Label.A,
            worker="1", time=19.0, annotations=None):
    return AssessmentRecord(
        record_id=record_id,
        query=query,
        doc_a=doc_a,
        doc_b=doc_b,
        label=label,
        assignment=AssignmentMeta(worker_id=worker, work_time_s=time),
        annotations=annotations,
    )


class TestRecordInvariants:
    def test_identical_rankers_rejected(self):
        with pytest.raises(ValueError, match="different rankers"):
            _record(doc_a="r1", doc_b="r1")

    def test_empty_query_rejected(self):
        with pytest.raises(ValueError, match="query"):
            _record(query="   ")

    def test_negative_work_time_rejected(self):
        with pytest.raises(ValueError, match="work_time"):
            AssignmentMeta(worker_id="1", work_time_s=-1.0)

    def test_approval_rate_range(self):
        with pytest.raises(ValueError, match="approval_rate"):
            AssignmentMeta(worker_id="1", work_time_s=0.0, approval_rate=1.5)

    def test_annotation_length_must_match_tokens(self):
        bad = Annotations(
            query_length=7, query_type=QueryType.NAVIGATIONAL, entity=EntityKind.COMPANY
        )
        with pytest.raises(ValueError, match="tokens"):
            _record(query="youtube", annotations=bad)


class TestSerpContent:
    def test_result_count_bounds(self):
        results = tuple(
            SerpResult(rank=i, title="t", url="u", snippet="s") for i in range(1, 11)
        )
        with pytest.raises(ValueError, match="between 1 and 9"):
            SerpContent(query="q", results=results)

    def test_ranks_must_be_consecutive(self):
        results = (
            SerpResult(rank=1, title="t", url="u", snippet="s"),
            SerpResult(rank=3, title="t", url="u", snippet="s"),
        )
        with pytest.raises(ValueError, match="consecutive"):
            SerpContent(query="q", results=results)


class TestBuildCollection:
    def test_sixrows_item_zero(self, annotated_records, sixrows_collection):
        # Facet values of the first fixture row under the default facet set.
        item = sixrows_collection.items[0]
        assert item.facet_values["Worker"] == "1"
        assert item.facet_values["Query"] == "youtube"
        assert item.facet_values["Answer"] == "A"
        assert item.facet_values["QueryType"] == "navigational"
        assert item.name == "youtube"
        assert item.description == "worker 1, answer A"

    def test_one_item_per_record_in_order(self, annotated_records, sixrows_collection):
        assert len(sixrows_collection.items) == len(annotated_records)
        for item, record in zip(sixrows_collection.items, annotated_records):
            assert item.record_id == record.record_id
            assert item.item_id == record.record_id

    def test_empty_records_preserve_facets(self):
        facets = (FacetDefinition("Worker", FacetKind.STRING, "worker_id"),)
        collection = build_collection([], facets, {})
        assert collection.items == ()
        assert collection.facets == facets

    def test_zero_facets(self):
        collection = build_collection([_record()], (), {0: ("a.svg", "a_tb.svg")})
        assert len(collection.items) == 1
        assert collection.items[0].facet_values == {}

    def test_missing_image_names_record(self):
        with pytest.raises(CollectionError, match="record 0"):
            build_collection([_record()], (), {})

    def test_unresolvable_source_names_facet(self):
        facets = (FacetDefinition("Mystery", FacetKind.STRING, "nonsense"),)
        with pytest.raises(CollectionError, match="Mystery"):
            build_collection([_record()], facets, {0: ("a.svg", "a_tb.svg")})

    def test_annotation_facet_requires_annotations(self):
        facets = (FacetDefinition("QueryType", FacetKind.STRING, "query_type"),)
        with pytest.raises(CollectionError, match="QueryType"):
            build_collection([_record()], facets, {0: ("a.svg", "a_tb.svg")})

    def test_duplicate_record_ids_rejected(self):
        records = [_record(record_id=0), _record(record_id=0, worker="2")]
        with pytest.raises(CollectionError, match="duplicate record_id"):
            build_collection(records, (), {0: ("a.svg", "a_tb.svg")})

    def test_deterministic(self, annotated_records):
        index = {r.record_id: ("i.svg", "t.svg") for r in annotated_records}
        first = build_collection(annotated_records, default_facets(), index)
        second = build_collection(annotated_records, default_facets(), index)
        assert first == second


class TestCollectionInvariants:
    def test_item_ids_must_be_contiguous(self):
        item = CollectionItem(5, "n", "d", "i.svg", "t.svg", {}, 5)
        with pytest.raises(CollectionError, match="contiguous"):
            Collection(title="t", facets=(), items=(item,))

    def test_facet_coverage_enforced(self):
        facets = (FacetDefinition("Worker", FacetKind.STRING, "worker_id"),)
        item = CollectionItem(0, "n", "d", "i.svg", "t.svg", {}, 0)
        with pytest.raises(CollectionError, match="exactly the declared facets"):
            Collection(title="t", facets=facets, items=(item,))

    def test_value_kind_enforced(self):
        facets = (FacetDefinition("WorkTime", FacetKind.NUMBER, "work_time"),)
        item = CollectionItem(0, "n", "d", "i.svg", "t.svg", {"WorkTime": "fast"}, 0)
        with pytest.raises(CollectionError, match="numeric"):
            Collection(title="t", facets=facets, items=(item,))

    def test_duplicate_facet_names_rejected(self):
        facets = (
            FacetDefinition("Worker", FacetKind.STRING, "worker_id"),
            FacetDefinition("Worker", FacetKind.STRING, "query"),
        )
        with pytest.raises(CollectionError, match="unique"):
            Collection(title="t", facets=facets, items=())


def test_number_token_forms():
    assert number_token(19.0) == "19"
    assert number_token(8.5) == "8.5"
    assert number_token(-0.0) == "0"
    assert float(number_token(0.1)) == 0.1
