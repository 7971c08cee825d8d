"""RDF data model plus the four wire formats the portal serves."""

from __future__ import annotations

from .isomorphism import graph_isomorphic
from .jsonld import serialize_jsonld
from .ntriples import RdfSyntaxError, parse_ntriples, serialize_ntriples, term_to_ntriples
from .rdfxml import UnsupportedGraph, serialize_rdfxml
from .terms import (
    RDF_NS,
    RDF_TYPE,
    RDF_VALUE,
    RDFS_NS,
    XSD_NS,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    TermError,
    Triple,
)
from .turtle import parse_turtle, serialize_turtle

# Wire formats and their media types (parameters stripped).
FORMAT_NTRIPLES = "ntriples"
FORMAT_TURTLE = "turtle"
FORMAT_RDFXML = "rdfxml"
FORMAT_JSONLD = "jsonld"

MEDIA_TYPES = {
    FORMAT_NTRIPLES: "application/n-triples",
    FORMAT_TURTLE: "text/turtle",
    FORMAT_RDFXML: "application/rdf+xml",
    FORMAT_JSONLD: "application/ld+json",
}

_SERIALIZERS = {
    FORMAT_NTRIPLES: serialize_ntriples,
    FORMAT_TURTLE: serialize_turtle,
    FORMAT_RDFXML: serialize_rdfxml,
    FORMAT_JSONLD: serialize_jsonld,
}


def serialize(graph: Graph, format: str) -> bytes:
    """Serialize a graph to one of the four supported wire formats."""
    try:
        writer = _SERIALIZERS[format]
    except KeyError:
        raise ValueError(f"unknown serialization format: {format!r}") from None
    return writer(graph)


__all__ = [
    "BlankNode",
    "Graph",
    "Iri",
    "Literal",
    "Term",
    "TermError",
    "Triple",
    "RdfSyntaxError",
    "UnsupportedGraph",
    "graph_isomorphic",
    "parse_ntriples",
    "parse_turtle",
    "serialize",
    "serialize_jsonld",
    "serialize_ntriples",
    "serialize_rdfxml",
    "serialize_turtle",
    "term_to_ntriples",
    "FORMAT_NTRIPLES",
    "FORMAT_TURTLE",
    "FORMAT_RDFXML",
    "FORMAT_JSONLD",
    "MEDIA_TYPES",
    "RDF_NS",
    "RDFS_NS",
    "XSD_NS",
    "RDF_TYPE",
    "RDF_VALUE",
]
