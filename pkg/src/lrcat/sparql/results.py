"""Serialization of solution sequences: the standard JSON results format
(fixed key order) and a simple TSV form for the command line."""

from __future__ import annotations

import json

from ..rdf import BlankNode, Iri, Literal, Term, term_to_ntriples
from .evaluator import SolutionSequence


def _cell(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    cell = {"type": "literal", "value": term.lexical}
    if term.lang is not None:
        cell["xml:lang"] = term.lang
    elif term.datatype is not None:
        cell["datatype"] = term.datatype
    return cell


def to_json_results(solutions: SolutionSequence) -> bytes:
    document = {
        "head": {"vars": list(solutions.vars)},
        "results": {
            "bindings": [
                {name: _cell(row[name]) for name in solutions.vars if name in row}
                for row in solutions.rows
            ]
        },
    }
    return json.dumps(document, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def to_tsv_results(solutions: SolutionSequence) -> bytes:
    lines = ["\t".join(f"?{name}" for name in solutions.vars)]
    for row in solutions.rows:
        lines.append(
            "\t".join(term_to_ntriples(row[name]) if name in row else "" for name in solutions.vars)
        )
    return ("\n".join(lines) + "\n").encode("utf-8")
