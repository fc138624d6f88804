import json
import shutil
from pathlib import Path

import pytest

from rave.cli import main
from rave.serialization import records_from_json

DATA = Path(__file__).parent / "data"


@pytest.fixture()
def workdir(tmp_path):
    shutil.copy(DATA / "sixrows.tsv", tmp_path / "results.tsv")
    shutil.copy(DATA / "sixrows_config.json", tmp_path / "config.json")
    shutil.copytree(DATA / "gazetteer", tmp_path / "gazetteer")
    return tmp_path


def _serps_file(records, path):
    doc = {
        str(r.record_id): {
            "query": r.query,
            "results": [
                {
                    "rank": rank,
                    "title": f"Result {rank} for {r.query}",
                    "url": f"https://example.net/{r.record_id}/{rank}",
                    "snippet": f"Snippet {rank}.",
                }
                for rank in (1, 2, 3)
            ],
        }
        for r in records
    }
    path.write_text(json.dumps(doc), encoding="utf-8")


def test_pipeline_end_to_end(workdir, capsys):
    records_path = workdir / "records.json"
    assert main([
        "ingest",
        "--config", str(workdir / "config.json"),
        "--input", str(workdir / "results.tsv"),
        "--out", str(records_path),
    ]) == 0
    assert "accepted 6 of 6" in capsys.readouterr().err

    annotated_path = workdir / "annotated.json"
    assert main([
        "annotate",
        "--gazetteer", str(workdir / "gazetteer"),
        "--in", str(records_path),
        "--out", str(annotated_path),
    ]) == 0
    records = records_from_json(annotated_path.read_text())
    assert all(r.annotations is not None for r in records)

    serps_path = workdir / "serps.json"
    _serps_file(records, serps_path)
    images_dir = workdir / "images"
    assert main(["render", "--serps", str(serps_path), "--out", str(images_dir)]) == 0
    assert len(list(images_dir.iterdir())) == 12

    report_path = workdir / "report.json"
    summary_dir = workdir / "summary"
    assert main([
        "analyze",
        "--in", str(annotated_path),
        "--report", str(report_path),
        "--summary", str(summary_dir),
    ]) == 0
    report = json.loads(report_path.read_text())
    assert report["rankers"]["wins"] == {"r1": 3, "r2": 2}
    summary_files = {p.name for p in summary_dir.iterdir()}
    assert summary_files == {
        "units.tsv",
        "workers.tsv",
        "rankers.tsv",
        "worker_workload.png",
        "ranker_preference.png",
    }

    # emit pivot reads the collection-directory layout: records.json + images/
    collection_dir = workdir / "collection"
    collection_dir.mkdir()
    shutil.copy(annotated_path, collection_dir / "records.json")
    shutil.copytree(images_dir, collection_dir / "images")
    cxml_path = workdir / "collection.cxml"
    assert main([
        "emit", "pivot",
        "--collection", str(collection_dir),
        "--out", str(cxml_path),
    ]) == 0
    assert cxml_path.read_text().startswith("<?xml")

    bundle_dir = workdir / "bundle"
    assert main([
        "emit", "bundle",
        "--records", str(annotated_path),
        "--images", str(images_dir),
        "--out", str(bundle_dir),
    ]) == 0
    manifest = json.loads((bundle_dir / "manifest.json").read_text())
    assert manifest["item_count"] == 6


def test_ingest_reports_rejects_to_stderr(workdir, capsys):
    bad = workdir / "bad.tsv"
    rows = (workdir / "results.tsv").read_text().splitlines()
    rows.insert(2, "youtube\tr1\tr1\t1\tnavigational\tcompany\tA\t9\t5")
    bad.write_text("\n".join(rows) + "\n")
    assert main([
        "ingest",
        "--config", str(workdir / "config.json"),
        "--input", str(bad),
        "--out", str(workdir / "records.json"),
    ]) == 0
    err = capsys.readouterr().err
    assert "accepted 6 of 7" in err
    assert "identical rankers" in err


def test_error_exit_code(workdir, capsys):
    code = main([
        "ingest",
        "--config", str(workdir / "config.json"),
        "--input", str(workdir / "nope.tsv"),
        "--out", str(workdir / "records.json"),
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_annotate_uses_builtin_gazetteer(workdir):
    records_path = workdir / "records.json"
    main([
        "ingest",
        "--config", str(workdir / "config.json"),
        "--input", str(workdir / "results.tsv"),
        "--out", str(records_path),
    ])
    out_path = workdir / "annotated.json"
    assert main(["annotate", "--in", str(records_path), "--out", str(out_path)]) == 0
    records = records_from_json(out_path.read_text())
    assert records[0].annotations.query_type.value == "navigational"


def test_serve_reads_rave_port_env(workdir, monkeypatch):
    # Wiring check only: a bad env value surfaces as the documented error.
    monkeypatch.setenv("RAVE_PORT", "not-a-port")
    code = main(["serve", "--bundle", str(workdir)])
    assert code == 2
