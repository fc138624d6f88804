"""Label aggregation, worker statistics, ranker preference, faceted filtering.

Everything here is a pure function over immutable inputs.  Aggregation
works per unit, where a unit is one query's A-B comparison and collects all
votes cast on it; majority means *strict* majority -- ties are explicit,
never broken arbitrarily, and tied units are excluded from agreement-rate
denominators.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .errors import UnknownFacetError
from .model import AssessmentRecord, Collection, CollectionItem, Label
from .serialization import json_number


@dataclass(frozen=True)
class Winner:
    """The ranker a label points at once A/B placement is unfolded.

    ``ranker`` is ``None`` when the worker judged both sides the same.
    """

    ranker: str | None

    @property
    def is_same(self) -> bool:
        return self.ranker is None


@dataclass(frozen=True)
class UnitSummary:
    """Vote distribution for one unit (one query's A-B comparison)."""

    query: str
    label_counts: Mapping[Label, int]
    majority: Label | None
    disagreement: float
    vote_total: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "label_counts", dict(self.label_counts))
        if sum(self.label_counts.values()) != self.vote_total:
            raise ValueError("label counts must sum to vote_total")
        if self.vote_total <= 0:
            raise ValueError("a unit needs at least one vote")
        if not 0.0 <= self.disagreement <= 1.0:
            raise ValueError("disagreement must be in [0, 1]")


@dataclass(frozen=True)
class WorkerSummary:
    """Per-worker workload and agreement statistics.

    ``agreement_rate`` is only defined over units with a strict majority; it
    is ``None`` for workers who only voted on tied units.
    """

    worker_id: str
    assignment_count: int
    mean_work_time_s: float
    agreement_rate: float | None
    share_of_work: float


@dataclass(frozen=True)
class PreferenceReport:
    """Ranker win counts plus raw column-position label counts.

    ``column_a_label_count``/``column_b_label_count`` count A/B labels
    before placement normalization -- the position-bias signal.
    """

    wins: Mapping[str, int]
    same_count: int
    column_a_label_count: int
    column_b_label_count: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "wins", dict(self.wins))


@dataclass(frozen=True)
class FacetSelection:
    """Chosen facet values: conjunction across facets, disjunction within.

    An empty mapping means "no filter".
    """

    chosen: Mapping[str, frozenset]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "chosen", {name: frozenset(values) for name, values in self.chosen.items()}
        )

    @classmethod
    def empty(cls) -> "FacetSelection":
        return cls({})

    def without(self, facet_name: str) -> "FacetSelection":
        """The same selection with one facet's constraint dropped."""
        return FacetSelection(
            {name: values for name, values in self.chosen.items() if name != facet_name}
        )


def normalize_preference(record: AssessmentRecord) -> Winner:
    """Unfold the random A/B placement: which ranker did this label prefer?"""
    if record.label is Label.A:
        return Winner(record.doc_a)
    if record.label is Label.B:
        return Winner(record.doc_b)
    return Winner(None)


def unit_summaries(records: Iterable[AssessmentRecord]) -> list[UnitSummary]:
    """One summary per distinct query, ordered by first appearance.

    Majority is the unique label with strictly maximal count; ``None`` marks
    a tie.  Disagreement is 1 minus the majority share.
    """
    votes: dict[str, Counter] = {}
    for record in records:
        votes.setdefault(record.query, Counter())[record.label] += 1
    summaries = []
    for query, counter in votes.items():
        total = sum(counter.values())
        top = max(counter.values())
        leaders = [label for label, count in counter.items() if count == top]
        counts = {label: counter[label] for label in (Label.A, Label.B, Label.SAME) if label in counter}
        summaries.append(
            UnitSummary(
                query=query,
                label_counts=counts,
                majority=leaders[0] if len(leaders) == 1 else None,
                disagreement=1.0 - top / total,
                vote_total=total,
            )
        )
    return summaries


def worker_summaries(
    records: Sequence[AssessmentRecord], units: Iterable[UnitSummary]
) -> list[WorkerSummary]:
    """Per-worker counts, mean work time, and majority agreement.

    ``units`` must come from the same records.  Output is ordered by
    assignment count descending, worker id ascending.
    """
    majority = {unit.query: unit.majority for unit in units if unit.majority is not None}
    total = len(records)
    stats: dict[str, list] = {}
    for record in records:
        entry = stats.setdefault(record.assignment.worker_id, [0, 0.0, 0, 0])
        entry[0] += 1
        entry[1] += record.assignment.work_time_s
        if record.query in majority:
            entry[3] += 1
            if record.label is majority[record.query]:
                entry[2] += 1
    summaries = [
        WorkerSummary(
            worker_id=worker_id,
            assignment_count=count,
            mean_work_time_s=time_sum / count,
            agreement_rate=agreed / judged if judged else None,
            share_of_work=count / total,
        )
        for worker_id, (count, time_sum, agreed, judged) in stats.items()
    ]
    summaries.sort(key=lambda s: (-s.assignment_count, s.worker_id))
    return summaries


def preference_report(records: Iterable[AssessmentRecord]) -> PreferenceReport:
    """Accumulate normalized wins and raw column-position label counts."""
    records = list(records)
    rankers = sorted({r.doc_a for r in records} | {r.doc_b for r in records})
    wins = {ranker: 0 for ranker in rankers}
    same_count = 0
    column_a = 0
    column_b = 0
    for record in records:
        winner = normalize_preference(record)
        if winner.is_same:
            same_count += 1
        else:
            wins[winner.ranker] += 1
        if record.label is Label.A:
            column_a += 1
        elif record.label is Label.B:
            column_b += 1
    return PreferenceReport(
        wins=wins,
        same_count=same_count,
        column_a_label_count=column_a,
        column_b_label_count=column_b,
    )


def _check_selection(collection: Collection, selection: FacetSelection) -> None:
    known = set(collection.facet_names)
    for name in selection.chosen:
        if name not in known:
            raise UnknownFacetError(f"unknown facet {name!r}")


def apply_selection(
    collection: Collection, selection: FacetSelection
) -> list[CollectionItem]:
    """Items satisfying every selected facet (disjunction within a facet).

    Original item order is preserved; an empty selection returns all items.
    """
    _check_selection(collection, selection)
    return [
        item
        for item in collection.items
        if all(
            item.facet_values[name] in accepted
            for name, accepted in selection.chosen.items()
        )
    ]


def facet_counts(
    collection: Collection, selection: FacetSelection, facet_name: str
) -> dict:
    """Value counts for one facet under the selection, own constraint removed.

    Standard multi-select faceting: the counts answer "what would I get if I
    toggled this value", so the facet's own filter does not mask its
    alternatives.  Keys are sorted (numerically for number facets).
    """
    if facet_name not in collection.facet_names:
        raise UnknownFacetError(f"unknown facet {facet_name!r}")
    matching = apply_selection(collection, selection.without(facet_name))
    counter = Counter(item.facet_values[facet_name] for item in matching)
    return {value: counter[value] for value in sorted(counter)}


@dataclass(frozen=True)
class AnalyticsReport:
    """Everything the analyst dashboards read: units, workers, rankers."""

    units: tuple[UnitSummary, ...]
    workers: tuple[WorkerSummary, ...]
    rankers: PreferenceReport

    def __post_init__(self) -> None:
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "workers", tuple(self.workers))


def compute_report(records: Sequence[AssessmentRecord]) -> AnalyticsReport:
    units = unit_summaries(records)
    return AnalyticsReport(
        units=tuple(units),
        workers=tuple(worker_summaries(records, units)),
        rankers=preference_report(records),
    )


def report_to_obj(report: AnalyticsReport) -> dict[str, Any]:
    """JSON-ready form of a report (the analytics.json schema)."""
    return {
        "units": [
            {
                "query": unit.query,
                "label_counts": {label.value: count for label, count in unit.label_counts.items()},
                "majority": unit.majority.value if unit.majority else None,
                "disagreement": unit.disagreement,
                "vote_total": unit.vote_total,
            }
            for unit in report.units
        ],
        "workers": [
            {
                "worker_id": worker.worker_id,
                "assignment_count": worker.assignment_count,
                "mean_work_time_s": json_number(worker.mean_work_time_s),
                "agreement_rate": worker.agreement_rate,
                "share_of_work": worker.share_of_work,
            }
            for worker in report.workers
        ],
        "rankers": {
            "wins": dict(report.rankers.wins),
            "same_count": report.rankers.same_count,
            "column_a_label_count": report.rankers.column_a_label_count,
            "column_b_label_count": report.rankers.column_b_label_count,
        },
    }
