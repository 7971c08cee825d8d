"""JSON-LD writer (expanded form).

Emits the expanded document form: a JSON array of node objects keyed by
full IRIs, with no context compaction. Expanded form is the simplest shape
every conforming JSON-LD processor accepts. Output is deterministic: nodes
sorted by @id, keys sorted, value objects sorted by their JSON encoding.
"""

from __future__ import annotations

import json
from typing import Any

from .terms import BlankNode, Graph, Iri, RDF_TYPE, Term


def _node_id(term: Term) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    raise TypeError("literal cannot be a node identifier")


def _value_object(obj: Term) -> dict[str, Any]:
    if isinstance(obj, (Iri, BlankNode)):
        return {"@id": _node_id(obj)}
    value: dict[str, Any] = {"@value": obj.lexical}
    if obj.lang is not None:
        value["@language"] = obj.lang
    elif obj.datatype is not None:
        value["@type"] = obj.datatype
    return value


def serialize_jsonld(graph: Graph) -> bytes:
    nodes: dict[str, dict[str, Any]] = {}
    for t in graph:
        node = nodes.setdefault(_node_id(t.subject), {"@id": _node_id(t.subject)})
        if t.predicate.value == RDF_TYPE and isinstance(t.object, Iri):
            node.setdefault("@type", []).append(t.object.value)
        else:
            node.setdefault(t.predicate.value, []).append(_value_object(t.object))

    out = []
    for node_id in sorted(nodes):
        node = nodes[node_id]
        ordered: dict[str, Any] = {"@id": node["@id"]}
        if "@type" in node:
            ordered["@type"] = sorted(node["@type"])
        for key in sorted(k for k in node if not k.startswith("@")):
            ordered[key] = sorted(node[key], key=lambda v: json.dumps(v, sort_keys=True))
        out.append(ordered)
    return json.dumps(out, ensure_ascii=False, indent=2, sort_keys=False).encode("utf-8")
