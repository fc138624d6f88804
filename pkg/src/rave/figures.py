"""Analyst-facing report extras: delimited summary tables and charts.

``write_summary`` drops TSV tables next to PNG charts (worker workload,
ranker preference distribution) so a report directory can be eyeballed or
pulled into a spreadsheet without touching the JSON API.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import AnalyticsReport
from .model import Label, number_token

BAR_COLOR = "#4878a8"


def write_summary(report: AnalyticsReport, out_dir: str | Path) -> list[Path]:
    """Write TSV tables and charts for a report; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [
        _write_units_table(report, out / "units.tsv"),
        _write_workers_table(report, out / "workers.tsv"),
        _write_rankers_table(report, out / "rankers.tsv"),
        _workload_chart(report, out / "worker_workload.png"),
        _preference_chart(report, out / "ranker_preference.png"),
    ]
    return written


def _open_writer(path: Path):
    handle = path.open("w", encoding="utf-8", newline="")
    return handle, csv.writer(handle, delimiter="\t", lineterminator="\n")


def _write_units_table(report: AnalyticsReport, path: Path) -> Path:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(
            ["query", "vote_total", "votes_a", "votes_b", "votes_same", "majority", "disagreement"]
        )
        for unit in report.units:
            writer.writerow(
                [
                    unit.query,
                    unit.vote_total,
                    unit.label_counts.get(Label.A, 0),
                    unit.label_counts.get(Label.B, 0),
                    unit.label_counts.get(Label.SAME, 0),
                    unit.majority.value if unit.majority else "tie",
                    repr(unit.disagreement),
                ]
            )
    return path


def _write_workers_table(report: AnalyticsReport, path: Path) -> Path:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(
            ["worker_id", "assignment_count", "share_of_work", "mean_work_time_s", "agreement_rate"]
        )
        for worker in report.workers:
            writer.writerow(
                [
                    worker.worker_id,
                    worker.assignment_count,
                    repr(worker.share_of_work),
                    number_token(worker.mean_work_time_s),
                    "" if worker.agreement_rate is None else repr(worker.agreement_rate),
                ]
            )
    return path


def _write_rankers_table(report: AnalyticsReport, path: Path) -> Path:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["winner", "count"])
        for ranker, count in report.rankers.wins.items():
            writer.writerow([ranker, count])
        writer.writerow(["same", report.rankers.same_count])
    return path


def _workload_chart(report: AnalyticsReport, path: Path) -> Path:
    workers = [w.worker_id for w in report.workers]
    counts = [w.assignment_count for w in report.workers]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.5 * len(workers) + 2.0), 3.5))
    ax.bar(range(len(workers)), counts, color=BAR_COLOR)
    ax.set_xticks(range(len(workers)))
    ax.set_xticklabels(workers, rotation=45, ha="right")
    ax.set_ylabel("assignments")
    ax.set_title("Worker workload")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _preference_chart(report: AnalyticsReport, path: Path) -> Path:
    labels = list(report.rankers.wins) + ["same"]
    counts = list(report.rankers.wins.values()) + [report.rankers.same_count]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(labels) + 2.0), 3.5))
    ax.bar(range(len(labels)), counts, color=BAR_COLOR)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_ylabel("judgments")
    ax.set_title("Ranker preference distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
