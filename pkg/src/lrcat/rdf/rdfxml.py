"""RDF/XML writer.

Writer-only by design: XML source records are handled by the ingest rule
engine, so no second XML-to-graph parser lives here. Output is deterministic
(sorted namespaces, subjects, predicates, objects) and re-parses to an
isomorphic graph with any conforming RDF/XML reader.
"""

from __future__ import annotations

import re
from xml.sax.saxutils import escape, quoteattr

from .terms import BlankNode, Graph, Iri, Term

RDF_XML_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

_NCNAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
_XML_BAD_RE = re.compile(r"[\x00-\x08\x0B\x0C\x0E-\x1F]")


class UnsupportedGraph(ValueError):
    """The graph cannot be represented in RDF/XML."""


def _split_predicate(iri: str) -> tuple[str, str]:
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut <= 0 or cut == len(iri) - 1:
        raise UnsupportedGraph(f"predicate IRI has no namespace/local-name split: {iri}")
    namespace, local = iri[: cut + 1], iri[cut + 1 :]
    if not _NCNAME_RE.match(local):
        raise UnsupportedGraph(f"predicate local name is not an XML name: {iri}")
    return namespace, local


def _check_text(value: str) -> str:
    if _XML_BAD_RE.search(value):
        raise UnsupportedGraph("literal contains characters XML 1.0 cannot carry")
    return value


def serialize_rdfxml(graph: Graph) -> bytes:
    """Serialize to RDF/XML with rdf:Description elements."""
    splits = {t.predicate.value: _split_predicate(t.predicate.value) for t in graph}
    foreign = sorted({ns for ns, _ in splits.values() if ns != RDF_XML_NS})
    prefixes = {RDF_XML_NS: "rdf"}
    for i, namespace in enumerate(foreign, start=1):
        prefixes[namespace] = f"ns{i}"

    by_subject: dict[Term, list] = {}
    for t in graph:
        by_subject.setdefault(t.subject, []).append(t)

    def subject_key(term: Term) -> tuple[int, str]:
        return (0, term.value) if isinstance(term, Iri) else (1, term.label)

    body_parts: list[str] = []
    for subject in sorted(by_subject, key=subject_key):
        if isinstance(subject, Iri):
            opener = f"  <rdf:Description rdf:about={quoteattr(subject.value)}>"
        else:
            opener = f"  <rdf:Description rdf:nodeID={quoteattr(subject.label)}>"
        rendered = []
        for t in by_subject[subject]:
            namespace, local = splits[t.predicate.value]
            tag = f"{prefixes[namespace]}:{local}"
            obj = t.object
            if isinstance(obj, Iri):
                rendered.append(f"    <{tag} rdf:resource={quoteattr(obj.value)}/>")
            elif isinstance(obj, BlankNode):
                rendered.append(f"    <{tag} rdf:nodeID={quoteattr(obj.label)}/>")
            else:
                attrs = ""
                if obj.lang is not None:
                    attrs = f" xml:lang={quoteattr(obj.lang)}"
                elif obj.datatype is not None:
                    attrs = f" rdf:datatype={quoteattr(obj.datatype)}"
                text = escape(_check_text(obj.lexical))
                rendered.append(f"    <{tag}{attrs}>{text}</{tag}>")
        body_parts.append("\n".join([opener, *sorted(rendered), "  </rdf:Description>"]))

    ns_attrs = [f'xmlns:rdf="{RDF_XML_NS}"']
    ns_attrs.extend(f"xmlns:{prefixes[ns]}={quoteattr(ns)}" for ns in foreign)
    header = '<?xml version="1.0" encoding="UTF-8"?>\n<rdf:RDF ' + " ".join(ns_attrs) + ">\n"
    return (header + "\n".join(body_parts) + ("\n" if body_parts else "") + "</rdf:RDF>\n").encode("utf-8")
