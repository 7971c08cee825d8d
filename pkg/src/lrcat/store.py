"""The portal's indexed store: triples, facets, full text, statistics.

Terms are interned to integers; the triple set lives in three sorted
permutation indexes (SPO, POS, OSP) so any bound prefix of a pattern is a
contiguous range found by bisection. The store is immutable once loaded;
refreshing the portal builds a new store and swaps it in.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .rdf import Graph, Iri, Term, Triple, parse_ntriples, serialize_ntriples, term_to_ntriples
from .records import CatalogRecord, NotARecord, facet_values, from_graph, to_graph
from .vocab import DCAT_DATASET, FACET_ORDER, RDF_TYPE, FacetKind


class DuplicateId(ValueError):
    pass


_TOKEN_SPLIT = None  # built lazily below


def tokenize(text: str) -> list[str]:
    """Case-folded alphanumeric runs; no stemming, no stop words."""
    tokens = []
    current = []
    for c in text.lower():
        if c.isalnum():
            current.append(c)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


@dataclass(frozen=True, slots=True)
class RecordSummary:
    id: str
    title: Optional[str]
    languages: tuple[str, ...]
    resource_type: Optional[str]


class TripleStore:
    """Immutable indexed triple set plus the records it was built from."""

    def __init__(self) -> None:
        self._term_ids: dict[Term, int] = {}
        self._terms: list[Term] = []
        self._spo: list[tuple[int, int, int]] = []
        self._pos: list[tuple[int, int, int]] = []
        self._osp: list[tuple[int, int, int]] = []
        self._triple_set: set[tuple[int, int, int]] = set()
        self.records: dict[str, CatalogRecord] = {}
        self.facet_index: dict[FacetKind, dict[str, list[str]]] = {}
        self.text_index: dict[str, list[tuple[str, FacetKind, int]]] = {}

    # -- construction --------------------------------------------------

    def _intern(self, term: Term) -> int:
        tid = self._term_ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._term_ids[term] = tid
            self._terms.append(term)
        return tid

    def _add_triple(self, triple: Triple) -> None:
        s = self._intern(triple.subject)
        p = self._intern(triple.predicate)
        o = self._intern(triple.object)
        key = (s, p, o)
        if key in self._triple_set:
            return
        self._triple_set.add(key)
        self._spo.append(key)
        self._pos.append((p, o, s))
        self._osp.append((o, s, p))

    def _finish(self) -> None:
        self._spo.sort()
        self._pos.sort()
        self._osp.sort()

    @classmethod
    def load(cls, records: Sequence[CatalogRecord]) -> "TripleStore":
        store = cls()
        seen: set[str] = set()
        for record in sorted(records, key=lambda r: r.id):
            if record.id in seen:
                raise DuplicateId(record.id)
            seen.add(record.id)
            store.records[record.id] = record
            for triple in sorted(
                to_graph(record),
                key=lambda t: (term_to_ntriples(t.subject), term_to_ntriples(t.predicate), term_to_ntriples(t.object)),
            ):
                store._add_triple(triple)
        store._finish()
        store._build_facet_index()
        store._build_text_index()
        return store

    @classmethod
    def from_dump(cls, data: bytes) -> "TripleStore":
        """Rebuild a store from a canonical N-Triples dump."""
        graph = parse_ntriples(data)
        dataset = Iri(DCAT_DATASET)
        rdf_type = Iri(RDF_TYPE)
        records = []
        for subject in sorted(
            {t.subject for t in graph.triples(predicate=rdf_type, object=dataset) if isinstance(t.subject, Iri)},
            key=lambda term: term.value,
        ):
            try:
                records.append(from_graph(graph, subject.value))
            except NotARecord:
                continue
        return cls.load(records)

    def _build_facet_index(self) -> None:
        index: dict[FacetKind, dict[str, list[str]]] = {facet: {} for facet in FacetKind}
        for record_id in sorted(self.records):
            record = self.records[record_id]
            for facet in FacetKind:
                for value in facet_values(record, facet):
                    index[facet].setdefault(value, []).append(record_id)
        self.facet_index = index

    def _build_text_index(self) -> None:
        index: dict[str, list[tuple[str, FacetKind, int]]] = {}
        for record_id in sorted(self.records):
            record = self.records[record_id]
            for facet in FacetKind:
                for value in facet_values(record, facet):
                    for position, token in enumerate(tokenize(value)):
                        index.setdefault(token, []).append((record_id, facet, position))
        self.text_index = index

    # -- the graph view -------------------------------------------------

    def __len__(self) -> int:
        return len(self._spo)

    def term_count(self) -> int:
        return len(self._terms)

    def triples(self) -> Iterator[Triple]:
        for s, p, o in self._spo:
            yield Triple(self._terms[s], self._terms[p], self._terms[o])

    def graph(self) -> Graph:
        return Graph(self.triples())

    def contains(self, triple: Triple) -> bool:
        parts = []
        for term in (triple.subject, triple.predicate, triple.object):
            tid = self._term_ids.get(term)
            if tid is None:
                return False
            parts.append(tid)
        return tuple(parts) in self._triple_set

    def match(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        object: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Triples matching the bound positions, via whichever permutation
        index makes the bound prefix contiguous. Deterministic order."""
        ids = []
        for term in (subject, predicate, object):
            if term is None:
                ids.append(None)
            else:
                tid = self._term_ids.get(term)
                if tid is None:
                    return
                ids.append(tid)
        s, p, o = ids

        if s is not None and p is not None and o is not None:
            if (s, p, o) in self._triple_set:
                yield Triple(self._terms[s], self._terms[p], self._terms[o])
            return

        if s is not None:
            prefix = (s,) if p is None else (s, p)
            index, order = self._spo, "spo"
            if p is None and o is not None:
                prefix = (o, s)
                index, order = self._osp, "osp"
        elif p is not None:
            prefix = (p,) if o is None else (p, o)
            index, order = self._pos, "pos"
        elif o is not None:
            prefix = (o,)
            index, order = self._osp, "osp"
        else:
            for s_id, p_id, o_id in self._spo:
                yield Triple(self._terms[s_id], self._terms[p_id], self._terms[o_id])
            return

        lo = bisect_left(index, prefix)
        hi = bisect_right(index, prefix + (float("inf"),) * (3 - len(prefix)))
        for row in index[lo:hi]:
            if order == "spo":
                s_id, p_id, o_id = row
            elif order == "pos":
                p_id, o_id, s_id = row
            else:
                o_id, s_id, p_id = row
            yield Triple(self._terms[s_id], self._terms[p_id], self._terms[o_id])

    def prefix_count(self, order: str, prefix: tuple[int, ...]) -> int:
        index = {"spo": self._spo, "pos": self._pos, "osp": self._osp}[order]
        lo = bisect_left(index, prefix)
        hi = bisect_right(index, prefix + (float("inf"),) * (3 - len(prefix)))
        return hi - lo

    def term_id(self, term: Term) -> Optional[int]:
        return self._term_ids.get(term)

    def record_graph(self, record_id: str) -> Graph:
        """The record's triples, including its blank-node children."""
        record = self.records.get(record_id)
        if record is None:
            raise KeyError(record_id)
        return to_graph(record)

    def dump(self) -> bytes:
        return serialize_ntriples(self.graph())


# -- faceted + free-text search ------------------------------------------


@dataclass(slots=True)
class SearchResult:
    total: int
    page: int
    page_size: int
    results: list[RecordSummary]
    facet_counts: dict[FacetKind, list[tuple[str, int]]]


def _summary(record: CatalogRecord) -> RecordSummary:
    return RecordSummary(
        id=record.id,
        title=record.titles[0][0] if record.titles else None,
        languages=tuple(ref.iso639_3 or ref.raw for ref in record.languages),
        resource_type=record.resource_type.label if record.resource_type else None,
    )


def facet_search(
    store: TripleStore,
    filters: Optional[dict[FacetKind, str]] = None,
    text_query: Optional[str] = None,
    page: int = 1,
    page_size: int = 10,
    facet_count_limit: int = 10,
) -> SearchResult:
    """Intersection of facet filters and text-token matches.

    Every query token must match somewhere in the record (any facet).
    Ordering: descending token-hit count, then record IRI. Facet counts are
    computed over the whole result set before pagination.
    """
    if page_size < 1:
        raise ValueError("page_size must be >= 1")
    if page < 1:
        raise ValueError("page must be >= 1")
    filters = filters or {}

    result_ids: Optional[set[str]] = None
    for facet, value in sorted(filters.items(), key=lambda kv: kv[0].value):
        postings = set(store.facet_index.get(facet, {}).get(value, []))
        result_ids = postings if result_ids is None else result_ids & postings

    hit_counts: dict[str, int] = {}
    if text_query and text_query.strip():
        tokens = tokenize(text_query)
        for token in tokens:
            postings = store.text_index.get(token, [])
            matched: dict[str, int] = {}
            for record_id, _, _ in postings:
                matched[record_id] = matched.get(record_id, 0) + 1
            token_ids = set(matched)
            result_ids = token_ids if result_ids is None else result_ids & token_ids
            for record_id, count in matched.items():
                hit_counts[record_id] = hit_counts.get(record_id, 0) + count

    if result_ids is None:
        result_ids = set(store.records)

    ordered = sorted(result_ids, key=lambda rid: (-hit_counts.get(rid, 0), rid))

    facet_counts: dict[FacetKind, list[tuple[str, int]]] = {}
    for facet in FACET_ORDER:
        counts: dict[str, int] = {}
        for record_id in result_ids:
            for value in facet_values(store.records[record_id], facet):
                counts[value] = counts.get(value, 0) + 1
        top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:facet_count_limit]
        facet_counts[facet] = top

    start = (page - 1) * page_size
    page_ids = ordered[start : start + page_size]
    return SearchResult(
        total=len(ordered),
        page=page,
        page_size=page_size,
        results=[_summary(store.records[rid]) for rid in page_ids],
        facet_counts=facet_counts,
    )


# -- statistics ------------------------------------------------------------


@dataclass(slots=True)
class CompletenessReport:
    total: int
    rows: list[tuple[str, int, float]]  # (facet label, absolute, relative %)

    def to_tsv(self) -> str:
        lines = ["Required Facet\tAbsolute Freq\tRelative Frequency"]
        lines.append(f"(none)\t{self.total}\t100.00%")
        for label, absolute, relative in self.rows:
            lines.append(f"{label}\t{absolute}\t{relative:.2f}%")
        return "\n".join(lines) + "\n"


_FACET_LABELS = {
    FacetKind.TITLE: "Title",
    FacetKind.DESCRIPTION: "Description",
    FacetKind.LANGUAGE: "Language",
    FacetKind.TYPE: "Type",
    FacetKind.RIGHTS: "Rights",
    FacetKind.CREATOR: "Creator",
    FacetKind.SUBJECT: "Subject",
    FacetKind.CONTACT_POINT: "Contact Point",
    FacetKind.ACCESS_URL: "Access URL",
}


def completeness_from_counts(total: int, absolute: dict[FacetKind, int]) -> CompletenessReport:
    if total < 0 or any(v < 0 or v > total for v in absolute.values()):
        raise ValueError("absolute frequencies must be within [0, total]")
    rows = []
    for facet in FACET_ORDER:
        freq = absolute.get(facet, 0)
        relative = 100.0 * freq / total if total else 0.0
        rows.append((_FACET_LABELS[facet], freq, relative))
    return CompletenessReport(total=total, rows=rows)


def completeness(store: TripleStore) -> CompletenessReport:
    """Fraction of records carrying at least one value per facet."""
    absolute = {facet: 0 for facet in FACET_ORDER}
    for record in store.records.values():
        for facet in FACET_ORDER:
            if facet_values(record, facet):
                absolute[facet] += 1
    return completeness_from_counts(len(store.records), absolute)


def corpus_stats(per_source: Sequence[tuple[str, int, int]]) -> list[tuple[str, int, int, str]]:
    """Rows of (source, records, triples, triples-per-record or "n/a")."""
    rows = []
    for source, records, triples in per_source:
        if records < 0 or triples < 0:
            raise ValueError("tallies must be >= 0")
        ratio = f"{triples / records:.1f}" if records else "n/a"
        rows.append((source, records, triples, ratio))
    return rows


def corpus_stats_tsv(rows: Iterable[tuple[str, int, int, str]]) -> str:
    lines = ["Source\tRecords\tTriples\tTriples per Record"]
    for source, records, triples, ratio in rows:
        lines.append(f"{source}\t{records}\t{triples}\t{ratio}")
    return "\n".join(lines) + "\n"
