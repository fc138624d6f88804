"""Deterministic query annotation: token counts, intent class, entity lookup.

All three classifiers are rule cascades over a :class:`Gazetteer`, so a
given gazetteer and query always yield the same annotation regardless of
input casing.  Gazetteers load from a directory of plain-text files:

* ``entities.tsv``   -- one ``phrase<TAB>category`` per line
  (category: person, company, or location)
* ``sites.tsv``      -- one known navigational target per line
* ``triggers.tsv``   -- one transactional trigger token per line

Lines starting with ``#`` are comments.  When the input file already carried
annotation columns, recomputed values win; disagreements are logged as
warnings so the analyst sees them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from .model import Annotations, AssessmentRecord, EntityKind, QueryType, token_count

logger = logging.getLogger(__name__)

_DOMAIN_SUFFIXES = (".com", ".org", ".net")

_ENTITY_CATEGORIES = {
    "person": EntityKind.PERSON,
    "company": EntityKind.COMPANY,
    "location": EntityKind.LOCATION,
}


def _normalize_phrase(phrase: str) -> str:
    return " ".join(phrase.lower().split())


@dataclass(frozen=True)
class Gazetteer:
    """Lookup tables behind the rule-based annotators.

    Phrases are whitespace-normalized and lowercased on construction; empty
    phrases are rejected.
    """

    entries: Mapping[str, EntityKind]
    site_names: frozenset[str] = frozenset()
    transactional_triggers: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        entries: dict[str, EntityKind] = {}
        for phrase, category in self.entries.items():
            normalized = _normalize_phrase(phrase)
            if not normalized:
                raise ValueError("gazetteer phrases cannot be empty")
            entries[normalized] = category
        object.__setattr__(self, "entries", entries)
        for attr in ("site_names", "transactional_triggers"):
            values = frozenset(_normalize_phrase(v) for v in getattr(self, attr))
            if "" in values:
                raise ValueError("gazetteer phrases cannot be empty")
            object.__setattr__(self, attr, values)

    @classmethod
    def empty(cls) -> "Gazetteer":
        return cls(entries={})

    @classmethod
    def from_dir(cls, path: str | Path) -> "Gazetteer":
        """Load ``entities.tsv``, ``sites.tsv``, and ``triggers.tsv`` from a directory.

        Missing files are treated as empty, but a directory containing none
        of the three is an error.
        """
        base = Path(path)
        entities_file = base / "entities.tsv"
        sites_file = base / "sites.tsv"
        triggers_file = base / "triggers.tsv"
        if not any(f.is_file() for f in (entities_file, sites_file, triggers_file)):
            raise ValueError(f"no gazetteer files in {base}")
        entries: dict[str, EntityKind] = {}
        for line_number, line in _read_lines(entities_file):
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(
                    f"{entities_file}:{line_number}: expected 'phrase<TAB>category'"
                )
            phrase, category = parts[0], parts[1].strip().lower()
            if category not in _ENTITY_CATEGORIES:
                raise ValueError(
                    f"{entities_file}:{line_number}: unknown category {category!r}"
                )
            entries[phrase] = _ENTITY_CATEGORIES[category]
        sites = frozenset(line for _, line in _read_lines(sites_file))
        triggers = frozenset(line for _, line in _read_lines(triggers_file))
        return cls(entries=entries, site_names=sites, transactional_triggers=triggers)


def _read_lines(path: Path) -> Iterable[tuple[int, str]]:
    if not path.is_file():
        return
    for line_number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line_number, line


def query_length(query: str) -> int:
    """Token count of the query (maximal whitespace-separated tokens)."""
    return token_count(query)


def classify_query_type(query: str, gazetteer: Gazetteer) -> QueryType:
    """Rule cascade, first match wins: transactional, navigational, informational.

    A query is transactional when any token is a trigger, navigational when
    the whole normalized query is a known site name or a single token ends
    in a recognized domain suffix, informational otherwise.
    """
    tokens = query.lower().split()
    if any(token in gazetteer.transactional_triggers for token in tokens):
        return QueryType.TRANSACTIONAL
    if " ".join(tokens) in gazetteer.site_names:
        return QueryType.NAVIGATIONAL
    if len(tokens) == 1 and tokens[0].endswith(_DOMAIN_SUFFIXES):
        return QueryType.NAVIGATIONAL
    return QueryType.INFORMATIONAL


def detect_entity(query: str, gazetteer: Gazetteer) -> EntityKind:
    """Longest-match lookup of contiguous token spans against the gazetteer.

    The longest matching span wins; ties on length break leftmost.
    """
    tokens = query.lower().split()
    for span in range(len(tokens), 0, -1):
        for start in range(len(tokens) - span + 1):
            phrase = " ".join(tokens[start : start + span])
            if phrase in gazetteer.entries:
                return gazetteer.entries[phrase]
    return EntityKind.NONE


def annotate_query(query: str, gazetteer: Gazetteer) -> Annotations:
    return Annotations(
        query_length=query_length(query),
        query_type=classify_query_type(query, gazetteer),
        entity=detect_entity(query, gazetteer),
    )


def annotate_records(
    records: Iterable[AssessmentRecord], gazetteer: Gazetteer
) -> list[AssessmentRecord]:
    """Populate every record's annotations from its query text.

    Recomputed values overwrite whatever the input carried; mismatches are
    logged so annotation drift in the source file is visible.  Order is
    preserved and records are otherwise unchanged.
    """
    annotated: list[AssessmentRecord] = []
    for record in records:
        fresh = annotate_query(record.query, gazetteer)
        stored = record.annotations
        if stored is not None and stored != fresh:
            diffs = []
            for field_name in ("query_length", "query_type", "entity"):
                old = getattr(stored, field_name)
                new = getattr(fresh, field_name)
                if old != new:
                    old_text = old.value if hasattr(old, "value") else old
                    new_text = new.value if hasattr(new, "value") else new
                    diffs.append(f"{field_name}: {old_text!r} -> {new_text!r}")
            logger.warning(
                "record %d (%r): stored annotations disagree with recomputation (%s)",
                record.record_id,
                record.query,
                "; ".join(diffs),
            )
        annotated.append(replace(record, annotations=fresh))
    return annotated
