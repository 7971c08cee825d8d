"""RDF term, triple, and graph model.

Terms come in three variants: IRIs, literals (optionally language-tagged or
datatyped), and blank nodes. A Graph is a set of triples with per-position
indexes so lookups by subject, predicate, or object stay cheap. Graphs are
treated as immutable once built; nothing here mutates a graph after its
constructor or loader returns it to the caller.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF_NS + "type"
RDF_VALUE = RDF_NS + "value"
RDF_LANG_STRING = RDF_NS + "langString"
XSD_STRING = XSD_NS + "string"

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_LANG_TAG_RE = re.compile(r"^[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*$")
_WHITESPACE_RE = re.compile(r"\s")


class TermError(ValueError):
    """Raised when a term would violate the model invariants."""


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI. Must carry a scheme and contain no whitespace."""

    value: str

    def __post_init__(self) -> None:
        if not _SCHEME_RE.match(self.value):
            raise TermError(f"IRI has no scheme component: {self.value!r}")
        if _WHITESPACE_RE.search(self.value):
            raise TermError(f"IRI contains whitespace: {self.value!r}")

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal with at most one of a language tag or a datatype IRI.

    A language tag implies the implicit language-string datatype, so
    ``datatype`` stays None whenever ``lang`` is set.
    """

    lexical: str
    lang: Optional[str] = None
    datatype: Optional[str] = None

    def __post_init__(self) -> None:
        if self.lang is not None and self.datatype is not None:
            raise TermError("literal cannot carry both a language tag and a datatype")
        if self.lang is not None and not _LANG_TAG_RE.match(self.lang):
            raise TermError(f"malformed language tag: {self.lang!r}")
        if self.datatype is not None and not _SCHEME_RE.match(self.datatype):
            raise TermError(f"datatype is not an absolute IRI: {self.datatype!r}")

    def __repr__(self) -> str:
        if self.lang is not None:
            return f"Literal({self.lexical!r}, lang={self.lang!r})"
        if self.datatype is not None:
            return f"Literal({self.lexical!r}, datatype={self.datatype!r})"
        return f"Literal({self.lexical!r})"


@dataclass(frozen=True, slots=True)
class BlankNode:
    """A blank node; labels are only meaningful within one graph."""

    label: str

    def __post_init__(self) -> None:
        if not self.label or _WHITESPACE_RE.search(self.label):
            raise TermError(f"bad blank node label: {self.label!r}")

    def __repr__(self) -> str:
        return f"BlankNode({self.label!r})"


Term = Union[Iri, Literal, BlankNode]


@dataclass(frozen=True, slots=True)
class Triple:
    """Subject (IRI or blank), predicate (IRI), object (any term)."""

    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise TermError("triple subject cannot be a literal")
        if not isinstance(self.predicate, Iri):
            raise TermError("triple predicate must be an IRI")

    def __iter__(self) -> Iterator[Term]:
        return iter((self.subject, self.predicate, self.object))


class Graph:
    """A set of triples indexed by subject, predicate, and object.

    Set semantics: adding an existing triple is a no-op and never
    double-counts. Safe for concurrent reads once construction is done.
    """

    __slots__ = ("_triples", "_by_subject", "_by_predicate", "_by_object")

    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        self._triples: set[Triple] = set()
        self._by_subject: dict[Term, set[Triple]] = {}
        self._by_predicate: dict[Term, set[Triple]] = {}
        self._by_object: dict[Term, set[Triple]] = {}
        for t in triples:
            self.add(t)

    def add(self, triple: Triple) -> None:
        if triple in self._triples:
            return
        self._triples.add(triple)
        self._by_subject.setdefault(triple.subject, set()).add(triple)
        self._by_predicate.setdefault(triple.predicate, set()).add(triple)
        self._by_object.setdefault(triple.object, set()).add(triple)

    def update(self, triples: Iterable[Triple]) -> None:
        for t in triples:
            self.add(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def triples(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        object: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Yield triples matching the bound positions (None = wildcard)."""
        candidates: Optional[set[Triple]] = None
        if subject is not None:
            candidates = self._by_subject.get(subject, set())
        if predicate is not None:
            by_p = self._by_predicate.get(predicate, set())
            candidates = by_p if candidates is None else candidates & by_p
        if object is not None:
            by_o = self._by_object.get(object, set())
            candidates = by_o if candidates is None else candidates & by_o
        if candidates is None:
            candidates = self._triples
        for t in candidates:
            yield t

    def subjects(self, predicate: Optional[Term] = None, object: Optional[Term] = None) -> Iterator[Term]:
        seen = set()
        for t in self.triples(None, predicate, object):
            if t.subject not in seen:
                seen.add(t.subject)
                yield t.subject

    def objects(self, subject: Optional[Term] = None, predicate: Optional[Term] = None) -> Iterator[Term]:
        seen = set()
        for t in self.triples(subject, predicate, None):
            if t.object not in seen:
                seen.add(t.object)
                yield t.object

    def blank_labels(self) -> set[str]:
        labels = set()
        for t in self._triples:
            if isinstance(t.subject, BlankNode):
                labels.add(t.subject.label)
            if isinstance(t.object, BlankNode):
                labels.add(t.object.label)
        return labels
