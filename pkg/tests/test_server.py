import json

import pytest
import requests

from lrcat.rdf import graph_isomorphic, parse_ntriples, parse_turtle
from lrcat.records import CatalogRecord, LanguageRef, RightsRef, mint_record_id, to_graph
from lrcat.server import NotAcceptable, Portal, negotiate, start_background
from lrcat.store import TripleStore
from lrcat.vocab import DEFAULT_BASE

from rdf_readers import parse_jsonld, parse_rdfxml


def fixture_records():
    records = [
        CatalogRecord(
            id=mint_record_id(DEFAULT_BASE, "metashare", "fig3"),
            source_repo="metashare",
            titles=[("Spanish LMF Apertium Dictionary", None)],
            descriptions=[("This is the LMF version of the Apertium Spanish dictionary.", None)],
            languages=[LanguageRef("es"), LanguageRef("Spanish", "spa", 1.0)],
            rights=RightsRef("GPL"),
            see_also=["http://metashare.elda.org/repository/browse/c19c5662"],
        )
    ]
    for i in range(9):
        records.append(
            CatalogRecord(
                id=mint_record_id(DEFAULT_BASE, "clarin", f"srv-{i}"),
                source_repo="clarin",
                titles=[(f"Corpus {i}", None)],
                languages=[LanguageRef(["spa", "deu", "fra"][i % 3], ["spa", "deu", "fra"][i % 3], 1.0)],
                resource_type=None,
                access_urls=[f"http://data.example.org/{i}.zip"] if i % 2 == 0 else [],
            )
        )
    return records


@pytest.fixture(scope="module")
def portal_server():
    store = TripleStore.load(fixture_records())
    portal = Portal(store=store, query_time_budget=2.0)
    server = start_background(portal)
    base = f"http://127.0.0.1:{server.server_address[1]}"
    yield base, store
    server.shutdown()


class TestNegotiate:
    def test_turtle(self):
        assert negotiate("text/turtle") == "turtle"

    def test_absent_header_html(self):
        assert negotiate(None) == "html"
        assert negotiate("*/*") == "html"

    def test_q_values(self):
        assert negotiate("application/rdf+xml;q=0.9, text/html") == "html"
        assert negotiate("application/rdf+xml;q=0.9, text/html;q=0.1") == "rdfxml"

    def test_extension_override_wins(self):
        assert negotiate("text/turtle", ".nt") == "ntriples"

    def test_not_acceptable(self):
        with pytest.raises(NotAcceptable):
            negotiate("application/vnd.exotic;q=0.8")

    def test_tie_prefers_server_order(self):
        assert negotiate("text/turtle, application/n-triples") == "turtle"

    def test_wildcard_subtype_uses_preference_order(self):
        assert negotiate("application/*") == "ntriples"
        assert negotiate("text/*") == "html"

    def test_total_over_garbage(self):
        for header in ["", ";;;", "q=", "text/", "a/b;q=zz, */*;q=x", "\x00\x01", ","]:
            try:
                negotiate(header)
            except NotAcceptable:
                pass


class TestResourcePages:
    def test_turtle_body_reparses(self, portal_server):
        base, store = portal_server
        record_id = sorted(store.records)[0]
        local = record_id.split(DEFAULT_BASE)[1]
        response = requests.get(base + local, headers={"Accept": "text/turtle"})
        assert response.status_code == 200
        graph = parse_turtle(response.content)
        assert graph_isomorphic(graph, store.record_graph(record_id))

    def test_unknown_id_404(self, portal_server):
        base, _ = portal_server
        assert requests.get(base + "/resource/clarin/nope").status_code == 404

    def test_html_page_contains_title_and_format_links(self, portal_server):
        base, store = portal_server
        fig3 = next(rid for rid, r in store.records.items() if r.source_repo == "metashare")
        local = fig3.split(DEFAULT_BASE)[1]
        response = requests.get(base + local, headers={"Accept": "text/html"})
        assert response.status_code == 200
        text = response.text
        assert "Spanish LMF Apertium Dictionary" in text
        for label in ("RDF/XML", "N-Triples", "Turtle", "JSON-LD"):
            assert label in text

    def test_extension_overrides(self, portal_server):
        base, store = portal_server
        record_id = sorted(store.records)[0]
        local = record_id.split(DEFAULT_BASE)[1]
        nt = requests.get(base + local + ".nt")
        assert nt.headers["Content-Type"].startswith("application/n-triples")
        assert graph_isomorphic(parse_ntriples(nt.content), store.record_graph(record_id))

    def test_406(self, portal_server):
        base, store = portal_server
        record_id = sorted(store.records)[0]
        local = record_id.split(DEFAULT_BASE)[1]
        response = requests.get(base + local, headers={"Accept": "application/vnd.exotic"})
        assert response.status_code == 406

    def test_all_records_all_formats_resolve(self, portal_server):
        base, store = portal_server
        accepts = ["text/html", "text/turtle", "application/n-triples", "application/ld+json", "application/rdf+xml"]
        parsers = {
            "text/turtle": parse_turtle,
            "application/n-triples": parse_ntriples,
            "application/ld+json": parse_jsonld,
            "application/rdf+xml": parse_rdfxml,
        }
        for record_id, record in store.records.items():
            local = record_id.split(DEFAULT_BASE)[1]
            for accept in accepts:
                response = requests.get(base + local, headers={"Accept": accept})
                assert response.status_code == 200, (record_id, accept)
                parser = parsers.get(accept)
                if parser is not None:
                    assert graph_isomorphic(parser(response.content), to_graph(record)), (record_id, accept)


class TestSearchApi:
    def test_free_text_finds_fig3(self, portal_server):
        base, store = portal_server
        payload = requests.get(base + "/api/search", params={"q": "spanish"}).json()
        assert payload["total"] >= 1
        assert any("Apertium" in (r["title"] or "") for r in payload["results"])

    def test_combined_filters_narrow(self, portal_server):
        base, _ = portal_server
        spa = requests.get(base + "/api/search", params={"language": "spa"}).json()
        both = requests.get(base + "/api/search", params={"language": "spa", "title": "Corpus 0"}).json()
        assert both["total"] <= spa["total"]

    def test_unknown_facet_400(self, portal_server):
        base, _ = portal_server
        assert requests.get(base + "/api/search", params={"color": "red"}).status_code == 400

    def test_bad_paging_400(self, portal_server):
        base, _ = portal_server
        assert requests.get(base + "/api/search", params={"page": "x"}).status_code == 400

    def test_facets_endpoint(self, portal_server):
        base, _ = portal_server
        payload = requests.get(base + "/api/facets").json()
        assert "Language" in payload["facets"]

    def test_search_matches_store_semantics(self, portal_server):
        base, store = portal_server
        from lrcat.store import facet_search
        from lrcat.vocab import FacetKind

        api = requests.get(base + "/api/search", params={"language": "spa", "pageSize": "50"}).json()
        direct = facet_search(store, {FacetKind.LANGUAGE: "spa"}, page_size=50)
        assert api["total"] == direct.total
        assert [r["id"] for r in api["results"]] == [s.id for s in direct.results]


class TestSparqlEndpoint:
    def test_valid_query(self, portal_server):
        base, _ = portal_server
        query = 'SELECT ?s WHERE { ?s <http://purl.org/dc/terms/language> "es" }'
        response = requests.get(base + "/sparql", params={"query": query})
        assert response.status_code == 200
        assert response.headers["Content-Type"].startswith("application/sparql-results+json")
        payload = response.json()
        assert payload["head"]["vars"] == ["s"]
        assert len(payload["results"]["bindings"]) == 1
        assert payload["results"]["bindings"][0]["s"]["type"] == "uri"

    def test_post_form_and_raw(self, portal_server):
        base, _ = portal_server
        query = "SELECT ?s WHERE { ?s ?p ?o } LIMIT 1"
        form = requests.post(base + "/sparql", data={"query": query})
        assert form.status_code == 200
        raw = requests.post(
            base + "/sparql", data=query.encode(), headers={"Content-Type": "application/sparql-query"}
        )
        assert raw.status_code == 200
        assert form.json() == raw.json()

    def test_syntax_error_400_with_position(self, portal_server):
        base, _ = portal_server
        response = requests.get(base + "/sparql", params={"query": "SELEC ?s WHERE { ?s ?p ?o }"})
        assert response.status_code == 400
        payload = response.json()
        assert "line" in payload and "column" in payload

    def test_unsupported_feature_400(self, portal_server):
        base, _ = portal_server
        response = requests.get(base + "/sparql", params={"query": "ASK { ?s ?p ?o }"})
        assert response.status_code == 400
        assert response.json()["token"] == "ASK"

    def test_timeout_returns_408_and_server_stays_healthy(self, portal_server):
        base, _ = portal_server
        hard = "SELECT * WHERE { ?a ?b ?c . ?d ?e ?f . ?g ?h ?i . ?j ?k ?l }"
        response = requests.get(base + "/sparql", params={"query": hard}, timeout=30)
        assert response.status_code in (200, 408)
        if response.status_code == 408:
            assert response.json()["error"] == "timeout"
        assert requests.get(base + "/health").status_code == 200


class TestMisc:
    def test_health(self, portal_server):
        base, store = portal_server
        payload = requests.get(base + "/health").json()
        assert payload["status"] == "ok"
        assert payload["records"] == len(store.records)

    def test_dump_roundtrip(self, portal_server):
        base, store = portal_server
        response = requests.get(base + "/dump.nt")
        assert response.status_code == 200
        assert response.content == store.dump()

    def test_search_page_renders(self, portal_server):
        base, _ = portal_server
        response = requests.get(base + "/search", params={"q": "corpus"})
        assert response.status_code == 200
        assert "<form" in response.text
