"""Independent re-parsers used to validate the RDF/XML and JSON-LD writers.

These deliberately share no code with the writers: the RDF/XML reader walks
an ElementTree, the JSON-LD reader walks plain parsed JSON. They only need
to cover the shapes the writers emit (rdf:Description elements, expanded
node objects), which keeps them honest as round-trip oracles.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET

from lrcat.rdf import RDF_NS, RDF_TYPE, BlankNode, Graph, Iri, Literal, Term, Triple

_RDF = "{" + RDF_NS + "}"
_XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"


def parse_rdfxml(data: bytes) -> Graph:
    root = ET.fromstring(data)
    assert root.tag == _RDF + "RDF", f"unexpected root element {root.tag}"
    graph = Graph()
    for desc in root:
        assert desc.tag == _RDF + "Description", f"unexpected element {desc.tag}"
        about = desc.get(_RDF + "about")
        node_id = desc.get(_RDF + "nodeID")
        subject: Term = Iri(about) if about is not None else BlankNode(node_id)
        for child in desc:
            assert child.tag.startswith("{"), f"unqualified predicate {child.tag}"
            namespace, local = child.tag[1:].split("}", 1)
            predicate = Iri(namespace + local)
            resource = child.get(_RDF + "resource")
            ref = child.get(_RDF + "nodeID")
            datatype = child.get(_RDF + "datatype")
            lang = child.get(_XML_LANG)
            if resource is not None:
                obj: Term = Iri(resource)
            elif ref is not None:
                obj = BlankNode(ref)
            else:
                obj = Literal(child.text or "", lang=lang, datatype=datatype)
            graph.add(Triple(subject, predicate, obj))
    return graph


def _jsonld_term(node_ref: str) -> Term:
    if node_ref.startswith("_:"):
        return BlankNode(node_ref[2:])
    return Iri(node_ref)


def parse_jsonld(data: bytes) -> Graph:
    doc = json.loads(data.decode("utf-8"))
    assert isinstance(doc, list), "expanded JSON-LD must be an array"
    graph = Graph()
    for node in doc:
        subject = _jsonld_term(node["@id"])
        for key, values in node.items():
            if key == "@id":
                continue
            if key == "@type":
                for type_iri in values:
                    graph.add(Triple(subject, Iri(RDF_TYPE), Iri(type_iri)))
                continue
            predicate = Iri(key)
            for value in values:
                if "@id" in value:
                    obj: Term = _jsonld_term(value["@id"])
                else:
                    obj = Literal(
                        value["@value"],
                        lang=value.get("@language"),
                        datatype=value.get("@type"),
                    )
                graph.add(Triple(subject, predicate, obj))
    return graph
