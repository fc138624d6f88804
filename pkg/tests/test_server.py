import http.client
import json

import pytest

from rave.analytics import FacetSelection
from rave.errors import MalformedQueryError, ServeError, UnknownFacetError
from rave.pivot import parse_cxml
from rave.serialization import canonical_json
from rave.server import (
    ServerConfig,
    facets_payload,
    items_payload,
    selection_from_query,
)


def _get(server, path):
    host, port = server.server_address
    connection = http.client.HTTPConnection(host, port, timeout=10)
    try:
        connection.request("GET", path)
        response = connection.getresponse()
        return response.status, dict(response.getheaders()), response.read()
    finally:
        connection.close()


@pytest.fixture()
def bundle_collection(sixrows_bundle):
    return parse_cxml((sixrows_bundle / "collection.cxml").read_text(encoding="utf-8"))


class TestSelectionFromQuery:
    def test_repeated_keys_are_disjunction(self, bundle_collection):
        selection = selection_from_query(bundle_collection, "Answer=A&Answer=Same")
        assert selection.chosen == {"Answer": frozenset({"A", "Same"})}

    def test_case_insensitive_facet_names(self, bundle_collection):
        selection = selection_from_query(bundle_collection, "query=youtube")
        assert selection.chosen == {"Query": frozenset({"youtube"})}

    def test_unknown_facet(self, bundle_collection):
        with pytest.raises(UnknownFacetError):
            selection_from_query(bundle_collection, "nosuchfacet=x")

    def test_number_facet_values_parsed(self, bundle_collection):
        selection = selection_from_query(bundle_collection, "QueryLength=2")
        assert selection.chosen == {"QueryLength": frozenset({2.0})}

    def test_bad_number_is_malformed(self, bundle_collection):
        with pytest.raises(MalformedQueryError):
            selection_from_query(bundle_collection, "QueryLength=lots")


class TestServerConfig:
    def test_port_range_validated(self, sixrows_bundle):
        with pytest.raises(ServeError, match="port"):
            ServerConfig(bundle_dir=sixrows_bundle, port=0)

    def test_missing_bundle_dir(self, tmp_path):
        with pytest.raises(ServeError, match="does not exist"):
            ServerConfig(bundle_dir=tmp_path / "nope", port=8080)

    def test_dir_without_manifest(self, tmp_path):
        with pytest.raises(ServeError, match="manifest"):
            ServerConfig(bundle_dir=tmp_path, port=8080)


class TestEndpoints:
    def test_collection_is_exhibit_json_verbatim(self, running_server, sixrows_bundle):
        status, headers, body = _get(running_server, "/api/collection")
        assert status == 200
        assert headers["Content-Type"].startswith("application/json")
        assert body == (sixrows_bundle / "exhibit.json").read_bytes()

    def test_items_match_in_process_results(self, running_server, bundle_collection):
        status, _, body = _get(running_server, "/api/items?query=selena%20gomez")
        assert status == 200
        selection = FacetSelection({"Query": {"selena gomez"}})
        expected = canonical_json(items_payload(bundle_collection, selection)).encode()
        assert body == expected
        assert len(json.loads(body)) == 3

    def test_facets_match_in_process_results(self, running_server, bundle_collection):
        status, _, body = _get(running_server, "/api/facets")
        assert status == 200
        expected = canonical_json(
            facets_payload(bundle_collection, FacetSelection.empty())
        ).encode()
        assert body == expected
        counts = json.loads(body)
        assert counts["Worker"] == {"1": 2, "2": 1, "3": 2, "4": 1}
        for facet_counts_map in counts.values():
            assert sum(facet_counts_map.values()) == 6

    def test_unknown_facet_is_400(self, running_server):
        status, _, body = _get(running_server, "/api/items?nosuchfacet=x")
        assert status == 400
        payload = json.loads(body)
        assert payload["error"] == "unknown facet"
        assert "detail" in payload

    def test_malformed_number_is_400(self, running_server):
        status, _, body = _get(running_server, "/api/facets?QueryLength=abc")
        assert status == 400
        assert json.loads(body)["error"] == "malformed query"

    def test_analytics_endpoints(self, running_server, sixrows_bundle):
        analytics = json.loads((sixrows_bundle / "analytics.json").read_text())
        for name in ("workers", "rankers", "units"):
            status, _, body = _get(running_server, f"/api/analytics/{name}")
            assert status == 200
            assert json.loads(body) == analytics[name]

    def test_rankers_values(self, running_server):
        _, _, body = _get(running_server, "/api/analytics/rankers")
        rankers = json.loads(body)
        assert rankers["wins"] == {"r1": 3, "r2": 2}
        assert rankers["same_count"] == 1

    def test_image_served_with_media_type(self, running_server):
        status, headers, body = _get(running_server, "/images/0.svg")
        assert status == 200
        assert headers["Content-Type"] == "image/svg+xml"
        assert body.startswith(b"<?xml")

    def test_missing_image_404(self, running_server):
        status, _, _ = _get(running_server, "/images/999.svg")
        assert status == 404

    def test_root_serves_index(self, running_server, sixrows_bundle):
        status, headers, body = _get(running_server, "/")
        assert status == 200
        assert headers["Content-Type"].startswith("text/html")
        assert body == (sixrows_bundle / "index.html").read_bytes()

    def test_path_traversal_blocked(self, running_server):
        status, _, _ = _get(running_server, "/images/../manifest.json")
        assert status == 404

    def test_unknown_api_path_404(self, running_server):
        status, _, body = _get(running_server, "/api/zzz")
        assert status == 404
        assert json.loads(body)["error"] == "not found"

    def test_deterministic_responses(self, running_server):
        first = _get(running_server, "/api/facets?Answer=A")
        second = _get(running_server, "/api/facets?Answer=A")
        assert first[2] == second[2]


def test_cors_header_when_configured(sixrows_bundle):
    import threading

    from conftest import _free_port
    from rave.server import make_server

    server = make_server(
        ServerConfig(
            bundle_dir=sixrows_bundle, port=_free_port(), cors_origin="https://analyst.example"
        )
    )
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        _, headers, _ = _get(server, "/api/collection")
        assert headers["Access-Control-Allow-Origin"] == "https://analyst.example"
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)
