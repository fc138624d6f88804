"""Canonical JSON, record (de)serialization, and XML escaping helpers.

records.json is the interchange format between the ingest, annotate,
analyze, and emit stages: a JSON array, one object per record, in record
order.  ``canonical_json`` is the single encoder used for every file and
API body, so identical data always produces identical bytes.
"""

from __future__ import annotations

import json
import re
from typing import Any, Sequence

from .errors import DatasetError
from .model import (
    Annotations,
    AssessmentRecord,
    AssignmentMeta,
    EntityKind,
    Label,
    QueryType,
)


def canonical_json(obj: Any) -> str:
    """Stable, human-readable JSON: two-space indent, unescaped Unicode."""
    return json.dumps(obj, ensure_ascii=False, indent=2, allow_nan=False) + "\n"


def json_number(value: float) -> int | float:
    """Integral floats serialize as JSON integers ("19" rather than "19.0")."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return int(value)
    return value


# Characters XML 1.0 cannot represent, not even as character references.
INVALID_XML_CHARS = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f\ud800-\udfff￾￿]")

_XML_TEXT_TABLE = str.maketrans(
    {"&": "&amp;", "<": "&lt;", ">": "&gt;", "\r": "&#13;"}
)
_XML_ATTR_TABLE = str.maketrans(
    {
        "&": "&amp;",
        "<": "&lt;",
        ">": "&gt;",
        '"': "&quot;",
        "\n": "&#10;",
        "\t": "&#9;",
        "\r": "&#13;",
    }
)


def xml_text(value: str) -> str:
    """Escape a string for use as XML element text."""
    return value.translate(_XML_TEXT_TABLE)


def xml_attr(value: str) -> str:
    """Escape a string for use inside a double-quoted XML attribute.

    Tabs, newlines, and carriage returns become character references so
    attribute-value normalization cannot alter them on the way back in.
    """
    return value.translate(_XML_ATTR_TABLE)


def record_to_obj(record: AssessmentRecord) -> dict[str, Any]:
    assignment: dict[str, Any] = {
        "worker_id": record.assignment.worker_id,
        "work_time_s": json_number(record.assignment.work_time_s),
    }
    if record.assignment.approval_rate is not None:
        assignment["approval_rate"] = record.assignment.approval_rate
    annotations = None
    if record.annotations is not None:
        annotations = {
            "query_length": record.annotations.query_length,
            "query_type": record.annotations.query_type.value,
            "entity": record.annotations.entity.value,
        }
    return {
        "record_id": record.record_id,
        "query": record.query,
        "doc_a": record.doc_a,
        "doc_b": record.doc_b,
        "label": record.label.value,
        "assignment": assignment,
        "annotations": annotations,
    }


def record_from_obj(obj: Any) -> AssessmentRecord:
    if not isinstance(obj, dict):
        raise DatasetError(f"record entry must be an object, got {type(obj).__name__}")
    try:
        assignment_obj = obj["assignment"]
        meta = AssignmentMeta(
            worker_id=assignment_obj["worker_id"],
            work_time_s=assignment_obj["work_time_s"],
            approval_rate=assignment_obj.get("approval_rate"),
        )
        annotations = None
        if obj.get("annotations") is not None:
            ann = obj["annotations"]
            annotations = Annotations(
                query_length=ann["query_length"],
                query_type=QueryType(ann["query_type"]),
                entity=EntityKind(ann["entity"]),
            )
        return AssessmentRecord(
            record_id=obj["record_id"],
            query=obj["query"],
            doc_a=obj["doc_a"],
            doc_b=obj["doc_b"],
            label=Label(obj["label"]),
            assignment=meta,
            annotations=annotations,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetError(f"bad record object: {exc}") from None


def records_to_json(records: Sequence[AssessmentRecord]) -> str:
    """Serialize records to the canonical records.json array."""
    return canonical_json([record_to_obj(r) for r in records])


def records_from_json(text: str) -> list[AssessmentRecord]:
    """Parse a records.json document back into records."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"records file is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise DatasetError("records file must hold a JSON array")
    records = []
    for position, obj in enumerate(data):
        try:
            records.append(record_from_obj(obj))
        except DatasetError as exc:
            raise DatasetError(f"record {position}: {exc}") from None
    return records
