import random

import pytest

from lrcat.records import CatalogRecord, LanguageRef, ResourceType, RightsRef, mint_record_id
from lrcat.store import (
    CompletenessReport,
    DuplicateId,
    TripleStore,
    completeness,
    completeness_from_counts,
    corpus_stats,
    corpus_stats_tsv,
    facet_search,
    tokenize,
)
from lrcat.rdf import Iri, Literal, Triple, graph_isomorphic
from lrcat.vocab import DEFAULT_BASE, FacetKind

LANG_POOL = ["spa", "deu", "fra", "eng", "ita", "nld", "ces"]
TYPE_POOL = [ResourceType("Corpus"), ResourceType("Lexical Conceptual Resource"), ResourceType("Tool/Service")]


def build_records(count: int, seed: int = 5) -> list[CatalogRecord]:
    rng = random.Random(seed)
    records = []
    for i in range(count):
        code = LANG_POOL[i % len(LANG_POOL)]
        records.append(
            CatalogRecord(
                id=mint_record_id(DEFAULT_BASE, "clarin", f"rec-{seed}-{i}"),
                source_repo="clarin",
                titles=[(f"Resource {i} about {code}", None)] if i % 10 != 9 else [],
                descriptions=[(f"Description number {i}", "en")] if i % 3 == 0 else [],
                languages=[LanguageRef(code, code, 1.0)],
                resource_type=TYPE_POOL[i % 3] if i % 4 != 3 else None,
                rights=RightsRef("CC0") if i % 5 == 0 else None,
                creators=[f"Creator {i % 6}"],
                subjects=["linguistics"] if i % 2 == 0 else [],
                access_urls=[f"http://data.example.org/{i}"] if i % 2 == 0 else [],
            )
        )
    return records


@pytest.fixture(scope="module")
def store500():
    return TripleStore.load(build_records(500))


class TestLoad:
    def test_single_record_size(self):
        records = build_records(1)
        store = TripleStore.load(records)
        from lrcat.records import to_graph

        assert len(store) == len(to_graph(records[0]))

    def test_empty(self):
        store = TripleStore.load([])
        assert len(store) == 0
        report = completeness(store)
        assert report.total == 0
        assert all(relative == 0.0 for _, _, relative in report.rows)

    def test_duplicate_id(self):
        records = build_records(2)
        records[1].id = records[0].id
        with pytest.raises(DuplicateId):
            TripleStore.load(records)

    def test_facet_postings_match_hand_counts(self, store500):
        spa_postings = store500.facet_index[FacetKind.LANGUAGE].get("spa", [])
        expected = sum(1 for i in range(500) if LANG_POOL[i % len(LANG_POOL)] == "spa")
        assert len(spa_postings) == expected
        cc0 = store500.facet_index[FacetKind.RIGHTS].get("CC0", [])
        assert len(cc0) == 100


class TestMatch:
    def test_wildcard_counts(self):
        store = TripleStore.load(build_records(10))
        assert len(list(store.match())) == len(store)

    def test_fully_bound(self):
        records = build_records(3)
        store = TripleStore.load(records)
        triple = next(store.triples())
        assert list(store.match(triple.subject, triple.predicate, triple.object)) == [triple]

    def test_match_equals_brute_force_on_random_stores(self):
        rng = random.Random(77)
        from graphgen import random_graph

        for _ in range(40):
            graph = random_graph(rng, max_triples=25)
            store = TripleStore()
            for triple in sorted(
                graph, key=lambda t: (str(t.subject), str(t.predicate), str(t.object))
            ):
                store._add_triple(triple)
            store._finish()
            all_triples = list(store.triples())
            terms = {t.subject for t in all_triples} | {t.predicate for t in all_triples} | {
                t.object for t in all_triples
            }
            pool = list(terms) + [Iri("http://absent.example.org/x")]
            for _ in range(25):
                s = rng.choice(pool) if rng.random() < 0.5 else None
                p = rng.choice(pool) if rng.random() < 0.5 else None
                o = rng.choice(pool) if rng.random() < 0.5 else None
                def ok(t):
                    return (
                        (s is None or t.subject == s)
                        and (p is None or t.predicate == p)
                        and (o is None or t.object == o)
                    )
                expected = [t for t in all_triples if ok(t)]
                try:
                    got = list(store.match(s, p, o))
                except Exception as exc:  # pattern may be term-type-invalid
                    raise AssertionError(f"match crashed on {(s, p, o)}: {exc}")
                assert sorted(map(str, got)) == sorted(map(str, expected)), (s, p, o)

    def test_deterministic_iteration(self):
        store = TripleStore.load(build_records(50))
        first = list(store.match(predicate=Iri("http://purl.org/dc/terms/language")))
        second = list(store.match(predicate=Iri("http://purl.org/dc/terms/language")))
        assert first == second


class TestFacetSearch:
    def test_language_filter_count(self, store500):
        result = facet_search(store500, filters={FacetKind.LANGUAGE: "spa"})
        expected = sum(1 for i in range(500) if LANG_POOL[i % len(LANG_POOL)] == "spa")
        assert result.total == expected

    def test_no_filters_returns_everything(self, store500):
        assert facet_search(store500).total == 500

    def test_text_ranking_puts_best_match_first(self):
        records = build_records(30)
        records[7].titles = [("Spanish LMF Apertium Dictionary", None)]
        records[7].descriptions = [("Apertium dictionary for Spanish; apertium lexicons.", None)]
        store = TripleStore.load(records)
        result = facet_search(store, text_query="apertium dictionary")
        assert result.results[0].id == records[7].id

    def test_all_tokens_must_match(self, store500):
        empty = facet_search(store500, text_query="spa zzzznope")
        assert empty.total == 0

    def test_monotone_narrowing(self, store500):
        broad = facet_search(store500, filters={FacetKind.LANGUAGE: "spa"})
        narrow = facet_search(
            store500, filters={FacetKind.LANGUAGE: "spa", FacetKind.TYPE: "Corpus"}
        )
        assert narrow.total <= broad.total
        broad_ids = {r.id for r in facet_search(store500, filters={FacetKind.LANGUAGE: "spa"}, page_size=500).results}
        narrow_ids = {r.id for r in facet_search(store500, filters={FacetKind.LANGUAGE: "spa", FacetKind.TYPE: "Corpus"}, page_size=500).results}
        assert narrow_ids <= broad_ids

    def test_facet_counts_cover_result_set(self, store500):
        result = facet_search(store500, filters={FacetKind.LANGUAGE: "deu"}, facet_count_limit=100)
        lang_counts = dict(result.facet_counts[FacetKind.LANGUAGE])
        assert lang_counts.get("deu") == result.total

    def test_pagination(self, store500):
        page1 = facet_search(store500, page=1, page_size=7)
        page2 = facet_search(store500, page=2, page_size=7)
        assert len(page1.results) == 7
        assert len(page2.results) == 7
        assert {r.id for r in page1.results}.isdisjoint({r.id for r in page2.results})
        assert page1.total == page2.total == 500

    def test_counts_before_pagination(self, store500):
        paged = facet_search(store500, page=1, page_size=3)
        unpaged = facet_search(store500, page=1, page_size=500)
        assert paged.facet_counts == unpaged.facet_counts


class TestCompleteness:
    def test_table_reference_values(self):
        report = completeness_from_counts(
            688287,
            {
                FacetKind.TITLE: 331199,
                FacetKind.DESCRIPTION: 89053,
                FacetKind.LANGUAGE: 52392,
                FacetKind.TYPE: 62063,
                FacetKind.RIGHTS: 36869,
                FacetKind.CREATOR: 244725,
                FacetKind.SUBJECT: 72768,
                FacetKind.CONTACT_POINT: 2436,
                FacetKind.ACCESS_URL: 229020,
            },
        )
        by_label = {label: relative for label, _, relative in report.rows}
        assert by_label["Title"] == pytest.approx(48.12, abs=0.01)
        assert by_label["Language"] == pytest.approx(7.61, abs=0.01)
        assert by_label["Creator"] == pytest.approx(35.56, abs=0.01)

    def test_all_titled(self):
        records = build_records(20)
        for record in records:
            if not record.titles:
                record.titles = [("t", None)]
        report = completeness(TripleStore.load(records))
        assert dict((l, r) for l, _, r in report.rows)["Title"] == 100.0

    def test_fixture_70_percent_language(self):
        records = build_records(10)
        for record in records[:3]:
            record.languages = []
        report = completeness(TripleStore.load(records))
        assert dict((l, r) for l, _, r in report.rows)["Language"] == pytest.approx(70.0)

    def test_title_count_equals_text_index(self, store500):
        report = completeness(store500)
        title_abs = dict((l, a) for l, a, _ in report.rows)["Title"]
        ids = set()
        for record in store500.records.values():
            for text, _ in record.titles:
                if tokenize(text):
                    ids.add(record.id)
        assert title_abs == len(ids)


class TestCorpusStats:
    def test_reference_rows(self):
        rows = corpus_stats([("metashare", 2442, 464572), ("clarin", 144570, 3381736)])
        assert rows[0][3] == "190.2"
        assert rows[1][3] == "23.4"

    def test_zero_records(self):
        rows = corpus_stats([("empty", 0, 0)])
        assert rows[0][3] == "n/a"

    def test_tsv_shape(self):
        text = corpus_stats_tsv(corpus_stats([("a", 10, 25)]))
        assert "a\t10\t25\t2.5" in text


class TestDumpRestore:
    def test_round_trip(self, store500):
        dump = store500.dump()
        restored = TripleStore.from_dump(dump)
        assert len(restored) == len(store500)
        assert restored.dump() == dump
        assert sorted(restored.records) == sorted(store500.records)

    def test_dump_deterministic(self, store500):
        assert store500.dump() == store500.dump()

    def test_record_graph_isomorphic_after_restore(self, store500):
        rid = sorted(store500.records)[0]
        restored = TripleStore.from_dump(store500.dump())
        assert graph_isomorphic(restored.record_graph(rid), store500.record_graph(rid))
