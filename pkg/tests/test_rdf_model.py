import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphgen import random_graph
from lrcat.rdf import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    RdfSyntaxError,
    TermError,
    Triple,
    graph_isomorphic,
    parse_ntriples,
    parse_turtle,
    serialize_jsonld,
    serialize_ntriples,
    serialize_rdfxml,
    serialize_turtle,
)
from lrcat.rdf.rdfxml import UnsupportedGraph
from rdf_readers import parse_jsonld, parse_rdfxml


def t(s, p, o):
    return Triple(s, p, o)


EX_A = Iri("http://ex/a")
EX_P = Iri("http://ex/p")


class TestTerms:
    def test_iri_requires_scheme(self):
        with pytest.raises(TermError):
            Iri("no-scheme-here/path")

    def test_iri_rejects_whitespace(self):
        with pytest.raises(TermError):
            Iri("http://ex/a b")

    def test_literal_lang_and_datatype_exclusive(self):
        with pytest.raises(TermError):
            Literal("x", lang="en", datatype="http://www.w3.org/2001/XMLSchema#string")

    def test_literal_lang_tag_checked(self):
        with pytest.raises(TermError):
            Literal("x", lang="not a tag")

    def test_predicate_must_be_iri(self):
        with pytest.raises(TermError):
            Triple(EX_A, Literal("p"), Literal("x"))

    def test_subject_never_literal(self):
        with pytest.raises(TermError):
            Triple(Literal("s"), EX_P, Literal("x"))


class TestGraph:
    def test_set_semantics(self):
        g = Graph()
        g.add(t(EX_A, EX_P, Literal("x")))
        g.add(t(EX_A, EX_P, Literal("x")))
        assert len(g) == 1

    def test_reachable_through_all_indexes(self):
        triple = t(EX_A, EX_P, Literal("x"))
        g = Graph([triple])
        assert list(g.triples(subject=EX_A)) == [triple]
        assert list(g.triples(predicate=EX_P)) == [triple]
        assert list(g.triples(object=Literal("x"))) == [triple]

    def test_pattern_filtering(self):
        g = Graph(
            [
                t(EX_A, EX_P, Literal("x")),
                t(EX_A, EX_P, Literal("y")),
                t(Iri("http://ex/b"), EX_P, Literal("x")),
            ]
        )
        assert len(list(g.triples(subject=EX_A, object=Literal("x")))) == 1
        assert len(list(g.triples(predicate=EX_P))) == 3


class TestNTriplesParse:
    def test_single_line(self):
        g = parse_ntriples(b'<http://ex/a> <http://ex/p> "x" .')
        assert len(g) == 1
        assert t(EX_A, EX_P, Literal("x")) in g

    def test_empty_input(self):
        assert len(parse_ntriples(b"")) == 0

    def test_comments_and_blank_lines(self):
        data = b'# comment\n\n<http://ex/a> <http://ex/p> "x" . # trailing\n'
        assert len(parse_ntriples(data)) == 1

    def test_lang_tag_and_datatype(self):
        g = parse_ntriples(
            b'<http://ex/a> <http://ex/p> "hola"@es .\n'
            b'<http://ex/a> <http://ex/p> "3"^^<http://www.w3.org/2001/XMLSchema#integer> .\n'
        )
        assert t(EX_A, EX_P, Literal("hola", lang="es")) in g
        assert t(EX_A, EX_P, Literal("3", datatype="http://www.w3.org/2001/XMLSchema#integer")) in g

    def test_escapes(self):
        uchar = "\\" + "u00E9"  # built by concatenation so the source stays ASCII
        nt = '<http://ex/a> <http://ex/p> "a\\tb\\nc\\"d\\\\e' + uchar + '" .'
        g = parse_ntriples(nt.encode("ascii"))
        (triple,) = list(g)
        assert triple.object.lexical == 'a\tb\nc"d\\e' + chr(0xE9)

    def test_error_position(self):
        with pytest.raises(RdfSyntaxError) as exc:
            parse_ntriples(b'<http://ex/a> <http://ex/p> "x" .\n<http://ex/b> nope .')
        assert exc.value.line == 2
        assert exc.value.column == 15

    def test_error_on_bad_utf8(self):
        with pytest.raises(RdfSyntaxError):
            parse_ntriples(b'<http://ex/a> <http://ex/p> "\xff\xfe" .')

    def test_never_crashes_on_arbitrary_bytes(self):
        rng = random.Random(99)
        for _ in range(300):
            blob = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 80)))
            try:
                parse_ntriples(blob)
            except RdfSyntaxError:
                pass


class TestNTriplesSerialize:
    def test_single_triple_exact_bytes(self):
        g = Graph([t(EX_A, EX_P, Literal("x"))])
        assert serialize_ntriples(g) == b'<http://ex/a> <http://ex/p> "x" .\n'

    def test_sorted_and_deterministic(self):
        triples = [
            t(Iri("http://ex/b"), EX_P, Literal("y")),
            t(EX_A, EX_P, Literal("x")),
            t(EX_A, EX_P, Literal("a")),
        ]
        out1 = serialize_ntriples(Graph(triples))
        out2 = serialize_ntriples(Graph(reversed(triples)))
        assert out1 == out2
        lines = out1.decode().splitlines()
        assert lines == sorted(lines)

    def test_ascii_only_output(self):
        g = Graph([t(EX_A, EX_P, Literal("café \U0001f409", lang="fr"))])
        out = serialize_ntriples(g)
        out.decode("ascii")
        assert b"\\u00E9" in out
        assert b"\\U0001F409" in out


class TestTurtle:
    def test_object_list(self):
        g = parse_turtle(b'@prefix ex: <http://ex/> . ex:a ex:p "x", "y" .')
        assert len(g) == 2

    def test_a_keyword(self):
        g = parse_turtle(b"@prefix ex: <http://ex/> . ex:a a ex:T .")
        (triple,) = list(g)
        assert triple.predicate.value == "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

    def test_predicate_object_list(self):
        g = parse_turtle(b'@prefix ex: <http://ex/> . ex:a ex:p "x" ; ex:q "y" ; .')
        assert len(g) == 2

    def test_blank_node_property_list(self):
        g = parse_turtle(b'@prefix ex: <http://ex/> . ex:a ex:p [ ex:q "x" ] .')
        assert len(g) == 2
        objects = [tr.object for tr in g.triples(predicate=Iri("http://ex/p"))]
        assert isinstance(objects[0], BlankNode)

    def test_fig3_style_record_has_six_triples(self):
        data = b"""
        @prefix dct: <http://purl.org/dc/terms/> .
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
        <http://ex/rec/1>
            dct:title "Spanish LMF Apertium Dictionary" ;
            dct:description "This is the LMF version of the Apertium Spanish dictionary." ;
            dct:language "es", "Spanish" ;
            dct:rights "GPL" ;
            rdfs:seeAlso <http://metashare.elda.org/repository/browse/c19c5662> .
        """
        g = parse_turtle(data)
        assert len(g) == 6
        langs = {tr.object.lexical for tr in g.triples(predicate=Iri("http://purl.org/dc/terms/language"))}
        assert langs == {"es", "Spanish"}

    def test_numeric_and_boolean_literals(self):
        g = parse_turtle(b"@prefix ex: <http://ex/> . ex:a ex:p 3, 4.5, true .")
        datatypes = {tr.object.datatype for tr in g}
        assert datatypes == {
            "http://www.w3.org/2001/XMLSchema#integer",
            "http://www.w3.org/2001/XMLSchema#decimal",
            "http://www.w3.org/2001/XMLSchema#boolean",
        }

    def test_collections_rejected_with_position(self):
        with pytest.raises(RdfSyntaxError):
            parse_turtle(b'@prefix ex: <http://ex/> . ex:a ex:p ("x" "y") .')

    def test_undefined_prefix(self):
        with pytest.raises(RdfSyntaxError):
            parse_turtle(b'ex:a ex:p "x" .')

    def test_error_carries_line(self):
        with pytest.raises(RdfSyntaxError) as exc:
            parse_turtle(b'@prefix ex: <http://ex/> .\nex:a ][ "x" .')
        assert exc.value.line == 2


class TestIsomorphism:
    def test_reflexive(self):
        g = parse_ntriples(b'_:x <http://ex/p> "v" .\n<http://ex/a> <http://ex/p> _:x .')
        assert graph_isomorphic(g, g)

    def test_blank_renaming(self):
        g1 = parse_ntriples(b'_:x <http://ex/p> "v" .\n<http://ex/a> <http://ex/p> _:x .')
        g2 = parse_ntriples(b'_:y <http://ex/p> "v" .\n<http://ex/a> <http://ex/p> _:y .')
        assert graph_isomorphic(g1, g2)

    def test_missing_triple(self):
        g1 = parse_ntriples(b'_:x <http://ex/p> "v" .\n<http://ex/a> <http://ex/p> _:x .')
        g2 = parse_ntriples(b'_:y <http://ex/p> "v" .')
        assert not graph_isomorphic(g1, g2)

    def test_distinguishes_swapped_structure(self):
        g1 = parse_ntriples(b'_:x <http://ex/p> "1" .\n_:y <http://ex/p> "2" .\n_:x <http://ex/q> _:y .')
        g2 = parse_ntriples(b'_:x <http://ex/p> "2" .\n_:y <http://ex/p> "1" .\n_:x <http://ex/q> _:y .')
        assert not graph_isomorphic(g1, g2)

    def test_equivalence_on_samples(self):
        rng = random.Random(7)
        graphs = [random_graph(rng) for _ in range(12)]
        for g in graphs:
            assert graph_isomorphic(g, g)
        for g1 in graphs[:6]:
            for g2 in graphs[6:]:
                assert graph_isomorphic(g1, g2) == graph_isomorphic(g2, g1)

    def test_transitive_over_relabelings(self):
        def relabel(graph, suffix):
            out = Graph()
            for tr in graph:
                s, o = tr.subject, tr.object
                if isinstance(s, BlankNode):
                    s = BlankNode(s.label + suffix)
                if isinstance(o, BlankNode):
                    o = BlankNode(o.label + suffix)
                out.add(Triple(s, tr.predicate, o))
            return out

        rng = random.Random(8)
        for _ in range(10):
            g1 = random_graph(rng)
            g2 = relabel(g1, "x")
            g3 = relabel(g2, "y")
            assert graph_isomorphic(g1, g2)
            assert graph_isomorphic(g2, g3)
            assert graph_isomorphic(g1, g3)


class TestRoundTrips:
    def test_ntriples_round_trip_samples(self):
        rng = random.Random(21)
        for _ in range(60):
            g = random_graph(rng)
            assert graph_isomorphic(parse_ntriples(serialize_ntriples(g)), g)

    def test_turtle_round_trip_samples(self):
        rng = random.Random(22)
        for _ in range(60):
            g = random_graph(rng)
            assert graph_isomorphic(parse_turtle(serialize_turtle(g)), g)

    def test_fifty_triple_fixture_round_trip(self):
        rng = random.Random(50)
        g = Graph()
        while len(g) < 50:
            for triple in random_graph(rng, max_triples=12):
                g.add(triple)
        assert len(g) >= 50
        again = parse_ntriples(serialize_ntriples(parse_ntriples(serialize_ntriples(g))))
        assert graph_isomorphic(again, g)

    def test_rdfxml_reparses_isomorphic(self):
        rng = random.Random(23)
        for _ in range(40):
            g = random_graph(rng)
            try:
                data = serialize_rdfxml(g)
            except UnsupportedGraph:
                continue
            assert graph_isomorphic(parse_rdfxml(data), g)

    def test_jsonld_reparses_isomorphic(self):
        rng = random.Random(24)
        for _ in range(40):
            g = random_graph(rng)
            assert graph_isomorphic(parse_jsonld(serialize_jsonld(g)), g)

    def test_rdfxml_unsplittable_predicate(self):
        g = Graph([t(EX_A, Iri("http://ex/123"), Literal("x"))])
        with pytest.raises(UnsupportedGraph):
            serialize_rdfxml(g)

    def test_empty_graph_turtle(self):
        out = serialize_turtle(Graph())
        text = out.decode()
        assert all(line.startswith("@prefix") or not line.strip() for line in text.splitlines())


@settings(max_examples=80, deadline=None)
@given(st.binary(max_size=200))
def test_parser_totality_fuzz(blob):
    for parser in (parse_ntriples, parse_turtle):
        try:
            parser(blob)
        except RdfSyntaxError:
            pass
