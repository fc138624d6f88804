"""Results-table ingestion: column-mapping config and row validation.

The results file is a delimited text table (tab by default), one assignment
per row, with a mandatory header.  A JSON configuration document binds
columns to the six record roles, declares extra facet columns, and fixes
the ranker and label vocabularies::

    {
      "roles": {
        "query": "Query", "doc_a": "doc_A", "doc_b": "doc_B",
        "label": "label", "worker_id": "worker_id", "work_time": "work time"
      },
      "facets": [
        {"column": "query length", "name": "QueryLength", "kind": "number"},
        {"column": "query type", "name": "QueryType"},
        {"column": "has_entity", "name": "HasEntity"}
      ],
      "rankers": ["r1", "r2"],
      "labels": {"A": "A", "B": "B", "same": "Same"},
      "delimiter": "\\t"
    }

``labels`` and ``delimiter`` are optional (A/B/same case-insensitive and tab
by default); ``roles`` may additionally bind an ``approval_rate`` column.
Unknown keys anywhere in the document are errors.

Row validation never aborts the parse: every data row is either accepted or
reported with a reason.  The only fatal conditions are a header that lacks a
bound column and an empty accepted set.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConfigError, DatasetError
from .model import (
    Annotations,
    AssessmentRecord,
    AssignmentMeta,
    EntityKind,
    FacetKind,
    Label,
    QueryType,
    number_token,
    token_count,
)

ROLE_NAMES = ("query", "doc_a", "doc_b", "label", "worker_id", "work_time")
OPTIONAL_ROLE_NAMES = ("approval_rate",)

DEFAULT_LABELS: Mapping[str, Label] = {"a": Label.A, "b": Label.B, "same": Label.SAME}

# Facet columns whose values ingest can pick up as pre-existing annotations.
_ANNOTATION_COLUMN_KEYS = {
    "querylength": "query_length",
    "query_length": "query_length",
    "querytype": "query_type",
    "query_type": "query_type",
    "hasentity": "entity",
    "has_entity": "entity",
    "entity": "entity",
}


def _normalize_key(name: str) -> str:
    return "".join(name.lower().split()).replace("-", "_")


@dataclass(frozen=True)
class FacetBinding:
    """Binds one input column to a facet display name and value kind."""

    column: str
    name: str
    kind: FacetKind = FacetKind.STRING

    @property
    def annotation_source(self) -> str | None:
        """The annotation field this column carries, if recognizable."""
        for key in (_normalize_key(self.column), _normalize_key(self.name)):
            if key in _ANNOTATION_COLUMN_KEYS:
                return _ANNOTATION_COLUMN_KEYS[key]
        return None


@dataclass(frozen=True)
class ColumnMapping:
    """Declarative binding of result-file columns to roles and facets."""

    roles: Mapping[str, str]
    facets: tuple[FacetBinding, ...] = ()
    rankers: frozenset[str] = frozenset()
    labels: Mapping[str, Label] = field(default_factory=lambda: dict(DEFAULT_LABELS))
    delimiter: str = "\t"

    def __post_init__(self) -> None:
        object.__setattr__(self, "roles", dict(self.roles))
        object.__setattr__(self, "facets", tuple(self.facets))
        object.__setattr__(self, "rankers", frozenset(self.rankers))
        object.__setattr__(self, "labels", dict(self.labels))
        missing = [role for role in ROLE_NAMES if not self.roles.get(role)]
        if missing:
            raise ConfigError(f"missing role binding: {', '.join(missing)}")
        unknown = set(self.roles) - set(ROLE_NAMES) - set(OPTIONAL_ROLE_NAMES)
        if unknown:
            raise ConfigError(f"unknown role(s): {', '.join(sorted(unknown))}")
        columns = list(self.roles.values())
        if len(set(columns)) != len(columns):
            raise ConfigError("role columns must be distinct")
        names = [binding.name for binding in self.facets]
        if len(set(names)) != len(names):
            raise ConfigError("facet names must be distinct")
        if not all(names):
            raise ConfigError("facet names cannot be empty")
        if not self.rankers:
            raise ConfigError("ranker vocabulary cannot be empty")
        if not self.labels:
            raise ConfigError("label vocabulary cannot be empty")
        if len(self.delimiter) != 1:
            raise ConfigError("delimiter must be a single character")

    @property
    def bound_columns(self) -> tuple[str, ...]:
        """Every column the mapping reads, roles first, without duplicates."""
        columns: list[str] = [self.roles[role] for role in ROLE_NAMES]
        if "approval_rate" in self.roles:
            columns.append(self.roles["approval_rate"])
        for binding in self.facets:
            if binding.column not in columns:
                columns.append(binding.column)
        return tuple(columns)


@dataclass(frozen=True)
class IngestReport:
    """Outcome of one parse: accepted count, per-row rejects, duplicates.

    Row numbers are 1-based positions among the data rows (the header is not
    counted).  ``duplicate_assignments`` lists each (worker_id, query) pair
    that appeared more than once; duplicates are warnings, not rejects.
    """

    accepted: int
    rejected: tuple[tuple[int, str], ...]
    duplicate_assignments: tuple[tuple[str, str], ...]


def parse_config(text: str) -> ColumnMapping:
    """Parse and validate a JSON column-mapping configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - {"roles", "facets", "rankers", "labels", "delimiter"}
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")

    roles = doc.get("roles")
    if not isinstance(roles, dict):
        raise ConfigError("config needs a 'roles' object")
    for role, column in roles.items():
        if not isinstance(column, str) or not column:
            raise ConfigError(f"role '{role}' must bind a non-empty column name")

    facets: list[FacetBinding] = []
    for position, entry in enumerate(doc.get("facets", [])):
        if not isinstance(entry, dict):
            raise ConfigError(f"facet entry {position} must be an object")
        extra = set(entry) - {"column", "name", "kind"}
        if extra:
            raise ConfigError(
                f"facet entry {position}: unknown key(s) {', '.join(sorted(extra))}"
            )
        column = entry.get("column")
        if not isinstance(column, str) or not column:
            raise ConfigError(f"facet entry {position} needs a 'column'")
        kind_name = entry.get("kind", "string")
        try:
            kind = FacetKind(kind_name)
        except ValueError:
            raise ConfigError(
                f"facet entry {position}: unknown value kind {kind_name!r}"
            ) from None
        facets.append(FacetBinding(column=column, name=entry.get("name", column), kind=kind))

    rankers = doc.get("rankers")
    if not isinstance(rankers, list) or not rankers:
        raise ConfigError("config needs a non-empty 'rankers' list")
    for ranker in rankers:
        if not isinstance(ranker, str) or not ranker:
            raise ConfigError("ranker ids must be non-empty strings")

    labels: dict[str, Label] = dict(DEFAULT_LABELS)
    if "labels" in doc:
        raw_labels = doc["labels"]
        if not isinstance(raw_labels, dict) or not raw_labels:
            raise ConfigError("'labels' must be a non-empty object")
        labels = {}
        for text_value, label_name in raw_labels.items():
            key = text_value.casefold()
            if key in labels:
                raise ConfigError(f"label input {text_value!r} bound twice")
            try:
                labels[key] = Label(label_name)
            except ValueError:
                raise ConfigError(
                    f"label input {text_value!r} maps to unknown label {label_name!r}"
                ) from None

    delimiter = doc.get("delimiter", "\t")
    if not isinstance(delimiter, str):
        raise ConfigError("'delimiter' must be a string")

    return ColumnMapping(
        roles=roles,
        facets=tuple(facets),
        rankers=frozenset(rankers),
        labels=labels,
        delimiter=delimiter,
    )


class _RowError(Exception):
    """Internal: one row failed validation; the message is the reason."""


def _has_surrogates(text: str) -> bool:
    return any(0xD800 <= ord(ch) <= 0xDFFF for ch in text)


def _capture_annotations(
    fields: Mapping[str, str], mapping: ColumnMapping, query: str
) -> Annotations | None:
    """Pick up annotations already present in the input file, when complete.

    All three annotation columns must be bound and parse cleanly, and the
    stored length must match the query's token count; otherwise the record
    starts un-annotated and the annotate stage fills it in.
    """
    raw: dict[str, str] = {}
    for binding in mapping.facets:
        source = binding.annotation_source
        if source is not None and binding.column in fields:
            raw.setdefault(source, fields[binding.column])
    if set(raw) != {"query_length", "query_type", "entity"}:
        return None
    try:
        length = int(raw["query_length"])
        annotations = Annotations(
            query_length=length,
            query_type=QueryType(raw["query_type"].strip().lower()),
            entity=EntityKind(raw["entity"].strip().lower()),
        )
    except ValueError:
        return None
    if length != token_count(query):
        return None
    return annotations


def parse_results(
    data: str | bytes, mapping: ColumnMapping
) -> tuple[list[AssessmentRecord], IngestReport]:
    """Parse a delimited results table into validated records.

    Accepts ``bytes`` (decoded as UTF-8; rows with invalid bytes are
    rejected, a bad header is fatal) or already-decoded ``str``.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8", errors="surrogateescape")
    else:
        text = data

    reader = csv.reader(io.StringIO(text), delimiter=mapping.delimiter)
    try:
        header_cells = next(reader)
    except StopIteration:
        raise DatasetError("empty dataset: no header row") from None
    except csv.Error as exc:
        raise DatasetError(f"malformed header row: {exc}") from None
    header = [cell.strip() for cell in header_cells]
    if _has_surrogates("".join(header)):
        raise DatasetError("header is not valid UTF-8")
    index: dict[str, int] = {}
    for position, name in enumerate(header):
        index.setdefault(name, position)
    missing = [column for column in mapping.bound_columns if column not in index]
    if missing:
        raise DatasetError(f"header is missing bound column(s): {', '.join(missing)}")

    accepted: list[AssessmentRecord] = []
    rejected: list[tuple[int, str]] = []
    duplicates: list[tuple[str, str]] = []
    seen_assignments: set[tuple[str, str]] = set()
    flagged: set[tuple[str, str]] = set()
    row_number = 0
    while True:
        try:
            cells = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            row_number += 1
            rejected.append((row_number, f"malformed row: {exc}"))
            continue
        if not cells:
            continue  # blank line, not a data row
        row_number += 1
        try:
            record = _parse_row(cells, index, mapping, record_id=len(accepted))
        except _RowError as exc:
            rejected.append((row_number, str(exc)))
            continue
        key = (record.assignment.worker_id, record.query)
        if key in seen_assignments and key not in flagged:
            duplicates.append(key)
            flagged.add(key)
        seen_assignments.add(key)
        accepted.append(record)

    if not accepted:
        raise DatasetError("empty dataset")
    report = IngestReport(
        accepted=len(accepted),
        rejected=tuple(rejected),
        duplicate_assignments=tuple(duplicates),
    )
    return accepted, report


def _parse_row(
    cells: list[str], index: Mapping[str, int], mapping: ColumnMapping, record_id: int
) -> AssessmentRecord:
    if any(_has_surrogates(cell) for cell in cells):
        raise _RowError("invalid UTF-8")

    fields: dict[str, str] = {}
    for column in mapping.bound_columns:
        position = index[column]
        if position >= len(cells):
            raise _RowError("truncated row")
        fields[column] = cells[position].strip()

    query = fields[mapping.roles["query"]]
    if not query:
        raise _RowError("empty query")
    doc_a = fields[mapping.roles["doc_a"]]
    doc_b = fields[mapping.roles["doc_b"]]
    for ranker in (doc_a, doc_b):
        if ranker not in mapping.rankers:
            raise _RowError(f"unknown ranker {ranker!r}")
    if doc_a == doc_b:
        raise _RowError("identical rankers")
    label_text = fields[mapping.roles["label"]]
    label = mapping.labels.get(label_text.casefold())
    if label is None:
        raise _RowError("unknown label")
    worker_id = fields[mapping.roles["worker_id"]]
    if not worker_id:
        raise _RowError("empty worker_id")
    time_text = fields[mapping.roles["work_time"]]
    try:
        work_time = float(time_text)
    except ValueError:
        raise _RowError(f"invalid work time {time_text!r}") from None
    if not math.isfinite(work_time):
        raise _RowError(f"invalid work time {time_text!r}")
    if work_time < 0:
        raise _RowError("negative work time")
    approval_rate = None
    if "approval_rate" in mapping.roles:
        approval_text = fields[mapping.roles["approval_rate"]]
        if approval_text:
            try:
                approval_rate = float(approval_text)
            except ValueError:
                raise _RowError(f"invalid approval rate {approval_text!r}") from None
            if not 0.0 <= approval_rate <= 1.0:
                raise _RowError(f"invalid approval rate {approval_text!r}")

    annotations = _capture_annotations(fields, mapping, query)
    try:
        return AssessmentRecord(
            record_id=record_id,
            query=query,
            doc_a=doc_a,
            doc_b=doc_b,
            label=label,
            assignment=AssignmentMeta(
                worker_id=worker_id, work_time_s=work_time, approval_rate=approval_rate
            ),
            annotations=annotations,
        )
    except ValueError as exc:  # defensive: preconditions are checked above
        raise _RowError(str(exc)) from None


def records_to_table(records: list[AssessmentRecord], mapping: ColumnMapping) -> str:
    """Serialize records back to a delimited table under ``mapping``.

    Inverse of :func:`parse_results` for accepted records: re-parsing the
    returned text yields identical records.  Annotations survive the round
    trip only when the mapping binds the three annotation columns.
    """
    label_text: dict[Label, str] = {}
    for text_value, label in mapping.labels.items():
        label_text.setdefault(label, text_value)

    columns = list(mapping.bound_columns)
    rows = [columns]
    for record in records:
        fields: dict[str, str] = {column: "" for column in columns}
        fields[mapping.roles["query"]] = record.query
        fields[mapping.roles["doc_a"]] = record.doc_a
        fields[mapping.roles["doc_b"]] = record.doc_b
        try:
            fields[mapping.roles["label"]] = label_text[record.label]
        except KeyError:
            raise DatasetError(
                f"label vocabulary has no input text for label {record.label.value!r}"
            ) from None
        fields[mapping.roles["worker_id"]] = record.assignment.worker_id
        fields[mapping.roles["work_time"]] = number_token(record.assignment.work_time_s)
        if "approval_rate" in mapping.roles and record.assignment.approval_rate is not None:
            fields[mapping.roles["approval_rate"]] = number_token(record.assignment.approval_rate)
        if record.annotations is not None:
            for binding in mapping.facets:
                source = binding.annotation_source
                if source == "query_length":
                    fields[binding.column] = str(record.annotations.query_length)
                elif source == "query_type":
                    fields[binding.column] = record.annotations.query_type.value
                elif source == "entity":
                    fields[binding.column] = record.annotations.entity.value
        rows.append([fields[column] for column in columns])

    buffer = io.StringIO()
    # CRLF row endings make QUOTE_MINIMAL quote fields containing either CR
    # or LF, which parse_results needs to read such fields back intact.
    writer = csv.writer(buffer, delimiter=mapping.delimiter, lineterminator="\r\n")
    writer.writerows(rows)
    return buffer.getvalue()
