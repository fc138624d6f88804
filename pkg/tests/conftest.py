import threading

import pytest

from pathlib import Path

from rave.analytics import compute_report
from rave.annotate import Gazetteer, annotate_records
from rave.exhibit import export_bundle
from rave.ingest import parse_config, parse_results
from rave.model import SerpContent, SerpResult, build_collection, default_facets
from rave.render import render_dataset
from rave.server import ServerConfig, make_server

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def sixrows_mapping():
    return parse_config((DATA / "sixrows_config.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def sixrows_records(sixrows_mapping):
    records, report = parse_results((DATA / "sixrows.tsv").read_bytes(), sixrows_mapping)
    assert report.accepted == 6
    return records


@pytest.fixture(scope="session")
def gazetteer():
    return Gazetteer.from_dir(DATA / "gazetteer")


@pytest.fixture(scope="session")
def annotated_records(sixrows_records, gazetteer):
    return annotate_records(sixrows_records, gazetteer)


def synthetic_serp(record, result_count=3):
    """A small deterministic page for a record; brand-free by construction."""
    results = tuple(
        SerpResult(
            rank=rank,
            title=f"Result {rank} for {record.query}",
            url=f"https://example.net/{record.record_id}/{rank}",
            snippet=f"Snippet text {rank} about {record.query}.",
        )
        for rank in range(1, result_count + 1)
    )
    return SerpContent(query=record.query, results=results)


@pytest.fixture(scope="session")
def sixrows_collection(annotated_records):
    index = {
        r.record_id: (f"images/{r.record_id}.svg", f"images/{r.record_id}_tb.svg")
        for r in annotated_records
    }
    return build_collection(
        annotated_records, default_facets(), index, title="Six-row fixture"
    )


@pytest.fixture(scope="session")
def sixrows_bundle(tmp_path_factory, annotated_records):
    """Full pipeline output on disk: rendered images plus exported bundle."""
    root = tmp_path_factory.mktemp("bundle")
    images = root / "images"
    serps = {r.record_id: synthetic_serp(r) for r in annotated_records}
    pairs = render_dataset(serps, images)
    index = {rid: (p.image_ref, p.thumbnail_ref) for rid, p in pairs.items()}
    collection = build_collection(
        annotated_records, default_facets(), index, title="Six-row fixture"
    )
    out = root / "out"
    export_bundle(collection, compute_report(annotated_records), out)
    return out


@pytest.fixture()
def running_server(sixrows_bundle):
    server = make_server(
        ServerConfig(bundle_dir=sixrows_bundle, port=_free_port(), host="127.0.0.1")
    )
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


def _free_port():
    import socket

    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]
