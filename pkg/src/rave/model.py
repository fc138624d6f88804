"""Domain model for assessment collections.

An :class:`AssessmentRecord` holds one worker assignment: the query, the A/B
placement of the two rankers under comparison, the worker's label, query
annotations, and assignment metadata.  Records compile into an immutable,
faceted :class:`Collection` -- the snapshot every emitter and the HTTP API
read from.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CollectionError


class Label(enum.Enum):
    """A worker's verdict on an A-B comparison."""

    A = "A"
    B = "B"
    SAME = "Same"


class QueryType(enum.Enum):
    NAVIGATIONAL = "navigational"
    INFORMATIONAL = "informational"
    TRANSACTIONAL = "transactional"


class EntityKind(enum.Enum):
    PERSON = "person"
    COMPANY = "company"
    LOCATION = "location"
    NONE = "none"


def token_count(query: str) -> int:
    """Number of whitespace-separated tokens after trimming."""
    return len(query.split())


def number_token(value: float) -> str:
    """Canonical text form of a numeric facet value ("19", "8.5")."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


@dataclass(frozen=True)
class Annotations:
    """Automatic query annotations: token count, intent class, named entity."""

    query_length: int
    query_type: QueryType
    entity: EntityKind

    def __post_init__(self) -> None:
        if self.query_length < 0:
            raise ValueError("query_length must be non-negative")


@dataclass(frozen=True)
class AssignmentMeta:
    """Worker-side metadata attached to one assignment."""

    worker_id: str
    work_time_s: float
    approval_rate: float | None = None

    def __post_init__(self) -> None:
        if not self.worker_id:
            raise ValueError("worker_id cannot be empty")
        object.__setattr__(self, "work_time_s", float(self.work_time_s))
        if not math.isfinite(self.work_time_s) or self.work_time_s < 0:
            raise ValueError("work_time_s must be a non-negative number")
        if self.approval_rate is not None:
            object.__setattr__(self, "approval_rate", float(self.approval_rate))
            if not 0.0 <= self.approval_rate <= 1.0:
                raise ValueError("approval_rate must be in [0, 1]")


@dataclass(frozen=True)
class AssessmentRecord:
    """One worker assignment: a labeled A-B comparison for a query.

    ``record_id`` is the 0-based position of the row among the accepted rows
    of its source table, which keeps ids stable without requiring ids in the
    input file.
    """

    record_id: int
    query: str
    doc_a: str
    doc_b: str
    label: Label
    assignment: AssignmentMeta
    annotations: Annotations | None = None

    def __post_init__(self) -> None:
        if self.record_id < 0:
            raise ValueError("record_id must be non-negative")
        if not self.query.strip():
            raise ValueError("query cannot be empty")
        if not self.doc_a or not self.doc_b:
            raise ValueError("ranker ids cannot be empty")
        if self.doc_a == self.doc_b:
            raise ValueError("doc_a and doc_b must name different rankers")
        if self.annotations is not None:
            expected = token_count(self.query)
            if self.annotations.query_length != expected:
                raise ValueError(
                    f"query_length {self.annotations.query_length} does not match "
                    f"the query's {expected} tokens"
                )


@dataclass(frozen=True)
class SerpResult:
    """One ranked hit: rank, title, display URL, snippet."""

    rank: int
    title: str
    url: str
    snippet: str


@dataclass(frozen=True)
class SerpContent:
    """A ranked hit list for one query; between one and nine results."""

    query: str
    results: tuple[SerpResult, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "results", tuple(self.results))
        if not self.query.strip():
            raise ValueError("query cannot be empty")
        if not 1 <= len(self.results) <= 9:
            raise ValueError("a result page holds between 1 and 9 results")
        for position, result in enumerate(self.results, start=1):
            if result.rank != position:
                raise ValueError("ranks must be 1..n, consecutive and increasing")


class FacetKind(enum.Enum):
    STRING = "string"
    NUMBER = "number"


#: Record fields and annotations a facet may read its value from.
FACET_SOURCES = (
    "query",
    "doc_a",
    "doc_b",
    "label",
    "worker_id",
    "work_time",
    "approval_rate",
    "query_length",
    "query_type",
    "entity",
)

_ANNOTATION_SOURCES = frozenset({"query_length", "query_type", "entity"})


@dataclass(frozen=True)
class FacetDefinition:
    """A named, typed attribute items expose for filtering and counting.

    ``source`` names the record field or annotation the facet reads (see
    :data:`FACET_SOURCES`); it is construction-time provenance and does not
    take part in equality -- two definitions describing the same baked
    collection compare equal by name and kind.
    """

    name: str
    kind: FacetKind
    source: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("facet name cannot be empty")


def facet_value(record: AssessmentRecord, facet: FacetDefinition) -> str | float:
    """Read ``facet``'s value from ``record``, converted to the facet's kind."""
    source = facet.source
    if source in _ANNOTATION_SOURCES:
        if record.annotations is None:
            raise CollectionError(
                f"facet '{facet.name}' reads annotation '{source}' but record "
                f"{record.record_id} is not annotated"
            )
        raw: object = getattr(record.annotations, source)
        if isinstance(raw, enum.Enum):
            raw = raw.value
    elif source == "query":
        raw = record.query
    elif source == "doc_a":
        raw = record.doc_a
    elif source == "doc_b":
        raw = record.doc_b
    elif source == "label":
        raw = record.label.value
    elif source == "worker_id":
        raw = record.assignment.worker_id
    elif source == "work_time":
        raw = record.assignment.work_time_s
    elif source == "approval_rate":
        if record.assignment.approval_rate is None:
            raise CollectionError(
                f"facet '{facet.name}': record {record.record_id} carries no approval rate"
            )
        raw = record.assignment.approval_rate
    else:
        raise CollectionError(f"facet '{facet.name}': unresolvable source {source!r}")
    if facet.kind is FacetKind.NUMBER:
        try:
            value = float(raw)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise CollectionError(
                f"facet '{facet.name}': value {raw!r} of record "
                f"{record.record_id} is not numeric"
            ) from None
        if not math.isfinite(value):
            raise CollectionError(f"facet '{facet.name}': non-finite value")
        return value
    if isinstance(raw, float):
        return number_token(raw)
    return str(raw)


@dataclass(frozen=True)
class CollectionItem:
    """One faceted item; links back to the record it was built from."""

    item_id: int
    name: str
    description: str
    image_ref: str
    thumbnail_ref: str
    facet_values: Mapping[str, str | float]
    record_id: int

    def __post_init__(self) -> None:
        values: dict[str, str | float] = {}
        for key, value in self.facet_values.items():
            if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                raise CollectionError(
                    f"item {self.item_id}: facet {key!r} holds unsupported value {value!r}"
                )
            values[key] = float(value) if isinstance(value, (int, float)) else value
        object.__setattr__(self, "facet_values", values)


@dataclass(frozen=True)
class Collection:
    """Immutable snapshot of faceted items.

    Items are ordered by ``item_id``, contiguous from 0, and each carries
    exactly one value of the declared kind per facet.  Safe to share across
    threads once constructed.
    """

    title: str
    facets: tuple[FacetDefinition, ...]
    items: tuple[CollectionItem, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "facets", tuple(self.facets))
        object.__setattr__(self, "items", tuple(self.items))
        names = [f.name for f in self.facets]
        if len(set(names)) != len(names):
            raise CollectionError("facet names must be unique")
        kinds = {f.name: f.kind for f in self.facets}
        for position, item in enumerate(self.items):
            if item.item_id != position:
                raise CollectionError(
                    f"item ids must be contiguous from 0; found {item.item_id} "
                    f"at position {position}"
                )
            if set(item.facet_values) != set(names):
                raise CollectionError(
                    f"item {item.item_id} does not cover exactly the declared facets"
                )
            for name, value in item.facet_values.items():
                kind = kinds[name]
                if kind is FacetKind.STRING and not isinstance(value, str):
                    raise CollectionError(
                        f"item {item.item_id}: facet '{name}' expects a string value"
                    )
                if kind is FacetKind.NUMBER:
                    if not isinstance(value, float):
                        raise CollectionError(
                            f"item {item.item_id}: facet '{name}' expects a numeric value"
                        )
                    if not math.isfinite(value):
                        raise CollectionError(
                            f"item {item.item_id}: facet '{name}' holds a non-finite number"
                        )

    @property
    def facet_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.facets)

    def facet(self, name: str) -> FacetDefinition:
        for facet in self.facets:
            if facet.name == name:
                return facet
        raise CollectionError(f"no facet named {name!r}")


def default_facets() -> tuple[FacetDefinition, ...]:
    """The standard facet set the pipeline uses when none is configured."""
    return (
        FacetDefinition("Worker", FacetKind.STRING, "worker_id"),
        FacetDefinition("Query", FacetKind.STRING, "query"),
        FacetDefinition("Answer", FacetKind.STRING, "label"),
        FacetDefinition("QueryType", FacetKind.STRING, "query_type"),
        FacetDefinition("HasEntity", FacetKind.STRING, "entity"),
        FacetDefinition("QueryLength", FacetKind.NUMBER, "query_length"),
        FacetDefinition("WorkTime", FacetKind.NUMBER, "work_time"),
    )


def build_collection(
    records: Sequence[AssessmentRecord],
    facet_defs: Iterable[FacetDefinition],
    image_index: Mapping[int, tuple[str, str]],
    title: str = "Assessment collection",
) -> Collection:
    """Compile records into a faceted collection, one item per record.

    ``image_index`` maps each record id to its ``(image_ref, thumbnail_ref)``
    pair.  Item names are the query text; descriptions summarize the worker
    and answer.
    """
    facets = tuple(facet_defs)
    seen: set[int] = set()
    items: list[CollectionItem] = []
    for position, record in enumerate(records):
        if record.record_id in seen:
            raise CollectionError(f"duplicate record_id {record.record_id}")
        seen.add(record.record_id)
        try:
            image_ref, thumbnail_ref = image_index[record.record_id]
        except KeyError:
            raise CollectionError(f"no image for record {record.record_id}") from None
        values = {facet.name: facet_value(record, facet) for facet in facets}
        items.append(
            CollectionItem(
                item_id=position,
                name=record.query,
                description=(
                    f"worker {record.assignment.worker_id}, answer {record.label.value}"
                ),
                image_ref=image_ref,
                thumbnail_ref=thumbnail_ref,
                facet_values=values,
                record_id=record.record_id,
            )
        )
    return Collection(title=title, facets=facets, items=tuple(items))
