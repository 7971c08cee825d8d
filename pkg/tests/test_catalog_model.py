import random

import pytest

from lrcat import vocab
from lrcat.rdf import Graph, Iri, Literal, Triple
from lrcat.records import (
    CORPUS,
    CatalogRecord,
    GraphDiagnostics,
    LanguageRef,
    NotARecord,
    ResourceType,
    RightsRef,
    TOOL_SERVICE,
    facet_values,
    from_graph,
    mint_record_id,
    records_equal,
    to_graph,
)
from lrcat.vocab import FacetKind

DCT_LANGUAGE = Iri(vocab.FACET_PROPERTIES[FacetKind.LANGUAGE])
DCT_RIGHTS = Iri(vocab.FACET_PROPERTIES[FacetKind.RIGHTS])


def fig3_record() -> CatalogRecord:
    rid = mint_record_id(vocab.DEFAULT_BASE, "metashare", "fig3-source")
    return CatalogRecord(
        id=rid,
        source_repo="metashare",
        titles=[("Spanish LMF Apertium Dictionary", None)],
        descriptions=[("This is the LMF version of the Apertium Spanish dictionary.", None)],
        languages=[LanguageRef("es"), LanguageRef("Spanish", "spa", 1.0)],
        rights=RightsRef("GPL"),
        see_also=["http://metashare.elda.org/repository/browse/c19c5662"],
    )


def random_record(rng: random.Random, index: int) -> CatalogRecord:
    repo = rng.choice(["metashare", "clarin", "datahub", "lremap"])
    rid = mint_record_id(vocab.DEFAULT_BASE, repo, f"src-{index}")
    langs = []
    for i in range(rng.randrange(0, 3)):
        if rng.random() < 0.5:
            langs.append(LanguageRef(f"lang-{i}"))
        else:
            langs.append(LanguageRef(f"Lang {i}", "spa" if i == 0 else "deu", rng.choice([1.0, 0.85, 0.9231])))
    rights = rng.choice([None, RightsRef("GPL"), RightsRef("CC BY 4.0", "https://spdx.org/licenses/CC-BY-4.0")])
    return CatalogRecord(
        id=rid,
        source_repo=repo,
        titles=[(f"Title {index}", rng.choice([None, "en"]))] if rng.random() < 0.9 else [],
        descriptions=[(f"Description {index} ü", "de")] if rng.random() < 0.7 else [],
        languages=langs,
        resource_type=rng.choice([None, CORPUS, TOOL_SERVICE, ResourceType("Survey")]),
        rights=rights,
        creators=sorted({f"Creator {i}" for i in range(rng.randrange(0, 3))}),
        subjects=sorted({f"subject-{i}" for i in range(rng.randrange(0, 3))}),
        contact_point=rng.choice([None, "contact@example.org"]),
        access_urls=sorted({f"http://data.example.org/{index}/{i}.zip" for i in range(rng.randrange(0, 3))}),
        see_also=sorted({f"http://source.example.org/{index}"} if rng.random() < 0.8 else set()),
        extras={"version": "1.0"} if rng.random() < 0.5 else {},
    )


class TestLanguageRef:
    def test_confidence_range(self):
        with pytest.raises(ValueError):
            LanguageRef("x", "spa", 1.5)

    def test_unassigned_needs_zero_confidence(self):
        with pytest.raises(ValueError):
            LanguageRef("x", None, 0.5)

    def test_assigned_needs_positive_confidence(self):
        with pytest.raises(ValueError):
            LanguageRef("x", "spa", 0.0)


class TestResourceType:
    def test_canonical_labels(self):
        assert CORPUS.label == "Corpus"
        assert ResourceType.from_label("lexical conceptual resource").label == "Lexical Conceptual Resource"
        assert ResourceType.from_label("TOOL/SERVICE") is TOOL_SERVICE or ResourceType.from_label("TOOL/SERVICE") == TOOL_SERVICE

    def test_other_label_passthrough(self):
        assert ResourceType.from_label("Survey").label == "Survey"


class TestToGraph:
    def test_fig3_language_and_rights_triples(self):
        g = to_graph(fig3_record())
        lang_values = {t.object.lexical for t in g.triples(predicate=DCT_LANGUAGE)}
        assert {"es", "Spanish"} <= lang_values
        rights_values = {t.object.lexical for t in g.triples(predicate=DCT_RIGHTS) if isinstance(t.object, Literal)}
        assert rights_values == {"GPL"}

    def test_minimal_record_two_triples(self):
        rid = mint_record_id(vocab.DEFAULT_BASE, "clarin", "only-title")
        record = CatalogRecord(id=rid, source_repo="clarin", titles=[("t", None)])
        g = to_graph(record)
        assert len(g) == 2

    def test_distribution_copied_to_root(self):
        rid = mint_record_id(vocab.DEFAULT_BASE, "datahub", "with-url")
        record = CatalogRecord(id=rid, source_repo="datahub", titles=[("t", None)], access_urls=["http://x/d.zip"])
        g = to_graph(record)
        root_urls = [t for t in g.triples(subject=Iri(rid), predicate=Iri(vocab.DCAT_ACCESS_URL))]
        assert len(root_urls) == 1
        dist_links = list(g.triples(subject=Iri(rid), predicate=Iri(vocab.DCAT_DISTRIBUTION)))
        assert len(dist_links) == 1
        nested = list(g.triples(subject=dist_links[0].object, predicate=Iri(vocab.DCAT_ACCESS_URL)))
        assert [t.object.value for t in nested] == ["http://x/d.zip"]


class TestFromGraph:
    def test_round_trip_fig3(self):
        record = fig3_record()
        assert records_equal(from_graph(to_graph(record), record.id), record)

    def test_round_trip_generated(self):
        rng = random.Random(4)
        for i in range(150):
            record = random_record(rng, i)
            back = from_graph(to_graph(record), record.id)
            assert records_equal(back, record), f"record {i} failed round trip"

    def test_unknown_predicate_counted(self):
        record = fig3_record()
        g = to_graph(record)
        g.add(Triple(Iri(record.id), Iri("http://ex/unknownProp"), Literal("x")))
        diag = GraphDiagnostics()
        back = from_graph(g, record.id, diagnostics=diag)
        assert records_equal(back, record)
        assert diag.unknown_predicates == 1

    def test_not_a_record(self):
        g = Graph([Triple(Iri("http://ex/a"), Iri("http://ex/p"), Literal("x"))])
        with pytest.raises(NotARecord):
            from_graph(g, "http://ex/a")

    def test_source_repo_derived_from_id(self):
        record = fig3_record()
        back = from_graph(to_graph(record), record.id)
        assert back.source_repo == "metashare"


class TestFacetValues:
    def test_fig3_language_values(self):
        assert facet_values(fig3_record(), FacetKind.LANGUAGE) == ["es", "Spanish"]

    def test_empty_rights(self):
        rid = mint_record_id(vocab.DEFAULT_BASE, "clarin", "r")
        record = CatalogRecord(id=rid, source_repo="clarin")
        assert facet_values(record, FacetKind.RIGHTS) == []

    def test_creators_insertion_order(self):
        rid = mint_record_id(vocab.DEFAULT_BASE, "clarin", "r")
        record = CatalogRecord(id=rid, source_repo="clarin", creators=["Zoe", "Ann"])
        assert facet_values(record, FacetKind.CREATOR) == ["Zoe", "Ann"]

    def test_empty_iff_no_triple(self):
        rng = random.Random(11)
        for i in range(60):
            record = random_record(rng, i)
            g = to_graph(record)
            for facet, prop in vocab.FACET_PROPERTIES.items():
                has_triple = any(True for _ in g.triples(subject=Iri(record.id), predicate=Iri(prop)))
                assert bool(facet_values(record, facet)) == has_triple, (facet, record)


class TestVocabulary:
    def test_nine_distinct_properties(self):
        iris = list(vocab.FACET_PROPERTIES.values())
        assert len(iris) == 9
        assert len(set(iris)) == 9

    def test_every_facet_has_property(self):
        assert set(vocab.FACET_PROPERTIES) == set(FacetKind)


class TestMinting:
    def test_stable_and_under_base(self):
        a = mint_record_id("http://lrcat.example.org", "clarin", "abc")
        b = mint_record_id("http://lrcat.example.org", "clarin", "abc")
        assert a == b
        assert a.startswith("http://lrcat.example.org/resource/clarin/")

    def test_distinct_sources_distinct_ids(self):
        assert mint_record_id("http://b", "clarin", "x") != mint_record_id("http://b", "clarin", "y")
