"""The unified catalog record: DCAT extended with language-resource extras.

A CatalogRecord is the post-harmonization view of one language resource.
``to_graph``/``from_graph`` give a lossless mapping to RDF: every flat
property the portal queries (dct:language literals, dct:rights, access
URLs) is present at the record root, while the pieces that need structure
to round-trip (language references with their ISO code and match
confidence, distributions) hang off blank nodes and are *also* copied to
the root where DCAT expects root-level values.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Optional

from . import vocab
from .rdf import BlankNode, Graph, Iri, Literal, Term, Triple, term_to_ntriples
from .vocab import FacetKind

# Source repositories the pipeline knows about; free-form names are allowed.
REPO_METASHARE = "metashare"
REPO_CLARIN = "clarin"
REPO_DATAHUB = "datahub"
REPO_LREMAP = "lremap"
KNOWN_REPOS = (REPO_METASHARE, REPO_CLARIN, REPO_DATAHUB, REPO_LREMAP)


class NotARecord(ValueError):
    """The graph has no dataset typing triple at the requested IRI."""


@dataclass(frozen=True, slots=True)
class ResourceType:
    """Resource category; the three canonical labels plus free-form ones."""

    label: str

    @classmethod
    def from_label(cls, label: str) -> "ResourceType":
        folded = label.strip().lower()
        for canonical in (CORPUS, LEXICAL_CONCEPTUAL, TOOL_SERVICE):
            if folded == canonical.label.lower():
                return canonical
        return cls(label.strip())

    @property
    def is_canonical(self) -> bool:
        return self in (CORPUS, LEXICAL_CONCEPTUAL, TOOL_SERVICE)


CORPUS = ResourceType("Corpus")
LEXICAL_CONCEPTUAL = ResourceType("Lexical Conceptual Resource")
TOOL_SERVICE = ResourceType("Tool/Service")


@dataclass(frozen=True, slots=True)
class LanguageRef:
    """A language mention: the original string plus its normalization.

    ``confidence`` is 1.0 for exact code or name matches, the similarity
    score for fuzzy assignments, and 0.0 whenever no code was assigned.
    """

    raw: str
    iso639_3: Optional[str] = None
    confidence: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")
        if self.iso639_3 is None and self.confidence != 0.0:
            raise ValueError("confidence must be 0.0 when no code is assigned")
        if self.iso639_3 is not None and self.confidence == 0.0:
            raise ValueError("assigned code needs a positive confidence")


@dataclass(frozen=True, slots=True)
class RightsRef:
    """Original rights string plus the registry IRI when one matched."""

    raw: str
    license_iri: Optional[str] = None


@dataclass(slots=True)
class CatalogRecord:
    id: str
    source_repo: str
    titles: list[tuple[str, Optional[str]]] = field(default_factory=list)
    descriptions: list[tuple[str, Optional[str]]] = field(default_factory=list)
    languages: list[LanguageRef] = field(default_factory=list)
    resource_type: Optional[ResourceType] = None
    rights: Optional[RightsRef] = None
    creators: list[str] = field(default_factory=list)
    subjects: list[str] = field(default_factory=list)
    contact_point: Optional[str] = None
    access_urls: list[str] = field(default_factory=list)
    see_also: list[str] = field(default_factory=list)
    extras: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        bad = set(self.extras) - set(vocab.EXTRA_KEYS)
        if bad:
            raise ValueError(f"unknown extras keys: {sorted(bad)}")


@dataclass
class GraphDiagnostics:
    """Tally of graph content ``from_graph`` had to ignore."""

    unknown_predicates: int = 0
    unknown_iris: list[str] = field(default_factory=list)


def mint_record_id(base: str, source_repo: str, source_key: str) -> str:
    """Stable portal IRI for a source record: hash of the source identifier."""
    digest = hashlib.sha256(source_key.encode("utf-8")).hexdigest()[:16]
    return f"{base.rstrip('/')}/resource/{source_repo}/{digest}"


def _lang_literal(text: str, lang: Optional[str]) -> Literal:
    return Literal(text, lang=lang) if lang else Literal(text)


def to_graph(record: CatalogRecord) -> Graph:
    """Emit the record as RDF. See the module docstring for the layout."""
    g = Graph()
    rec = Iri(record.id)
    props = vocab.FACET_PROPERTIES
    # blank labels must stay unique when many records share one graph
    scope = hashlib.sha256(record.id.encode("utf-8")).hexdigest()[:12]
    g.add(Triple(rec, Iri(vocab.RDF_TYPE), Iri(vocab.DCAT_DATASET)))

    for text, lang in record.titles:
        g.add(Triple(rec, Iri(props[FacetKind.TITLE]), _lang_literal(text, lang)))
    for text, lang in record.descriptions:
        g.add(Triple(rec, Iri(props[FacetKind.DESCRIPTION]), _lang_literal(text, lang)))

    used_labels: set[str] = set()

    def fresh_node(kind: str, content: str) -> BlankNode:
        # content-derived labels keep the emitted graph canonical no matter
        # how the record's lists are ordered
        digest = hashlib.sha256(content.encode("utf-8")).hexdigest()[:8]
        label = f"{scope}-{kind}-{digest}"
        while label in used_labels:
            label += "x"
        used_labels.add(label)
        return BlankNode(label)

    for ref in record.languages:
        g.add(Triple(rec, Iri(props[FacetKind.LANGUAGE]), Literal(ref.raw)))
        node = fresh_node("lang", f"{ref.raw}|{ref.iso639_3 or ''}|{ref.confidence!r}")
        g.add(Triple(rec, Iri(vocab.MS_LANGUAGE_REF), node))
        g.add(Triple(node, Iri(vocab.RDF_VALUE), Literal(ref.raw)))
        if ref.iso639_3 is not None:
            g.add(Triple(rec, Iri(props[FacetKind.LANGUAGE]), Literal(ref.iso639_3)))
            g.add(Triple(node, Iri(vocab.MS_ISO639_3), Literal(ref.iso639_3)))
            g.add(Triple(node, Iri(vocab.MS_CONFIDENCE), Literal(repr(ref.confidence), datatype=vocab.XSD_DOUBLE)))

    if record.resource_type is not None:
        g.add(Triple(rec, Iri(props[FacetKind.TYPE]), Literal(record.resource_type.label)))

    if record.rights is not None:
        g.add(Triple(rec, Iri(props[FacetKind.RIGHTS]), Literal(record.rights.raw)))
        if record.rights.license_iri is not None:
            g.add(Triple(rec, Iri(props[FacetKind.RIGHTS]), Iri(record.rights.license_iri)))

    for creator in record.creators:
        g.add(Triple(rec, Iri(props[FacetKind.CREATOR]), Literal(creator)))
    for subject in record.subjects:
        g.add(Triple(rec, Iri(props[FacetKind.SUBJECT]), Literal(subject)))
    if record.contact_point is not None:
        g.add(Triple(rec, Iri(props[FacetKind.CONTACT_POINT]), Literal(record.contact_point)))

    for url in record.access_urls:
        g.add(Triple(rec, Iri(props[FacetKind.ACCESS_URL]), Iri(url)))
        dist = fresh_node("dist", url)
        g.add(Triple(rec, Iri(vocab.DCAT_DISTRIBUTION), dist))
        g.add(Triple(dist, Iri(vocab.RDF_TYPE), Iri(vocab.DCAT_DISTRIBUTION_CLASS)))
        g.add(Triple(dist, Iri(vocab.DCAT_ACCESS_URL), Iri(url)))

    for url in record.see_also:
        g.add(Triple(rec, Iri(vocab.RDFS_SEE_ALSO), Iri(url)))

    for key in vocab.EXTRA_KEYS:
        if key in record.extras:
            g.add(Triple(rec, Iri(vocab.EXTRA_PROPERTIES[key]), Literal(record.extras[key])))

    return g


_KNOWN_ROOT_PREDICATES = (
    {vocab.RDF_TYPE, vocab.RDFS_SEE_ALSO, vocab.DCAT_DISTRIBUTION, vocab.MS_LANGUAGE_REF}
    | set(vocab.FACET_PROPERTIES.values())
    | set(vocab.EXTRA_PROPERTIES.values())
)


def _sorted_texts(values: set[tuple[str, Optional[str]]]) -> list[tuple[str, Optional[str]]]:
    return sorted(values, key=lambda pair: (pair[0], pair[1] or ""))


def from_graph(graph: Graph, record_id: str, source_repo: str = "", diagnostics: Optional[GraphDiagnostics] = None) -> CatalogRecord:
    """Inverse of ``to_graph``; unknown predicates are counted, not fatal.

    List-valued fields come back sorted, so round-tripping preserves content
    up to list order. Raises NotARecord when the dataset typing triple is
    missing at ``record_id``.
    """
    rec = Iri(record_id)
    props = vocab.FACET_PROPERTIES
    if not any(
        isinstance(t.object, Iri) and t.object.value == vocab.DCAT_DATASET
        for t in graph.triples(rec, Iri(vocab.RDF_TYPE))
    ):
        raise NotARecord(f"no dcat:Dataset typing triple at {record_id}")
    if not source_repo:
        m = re.search(r"/resource/([^/]+)/[^/]+$", record_id)
        source_repo = m.group(1) if m else ""

    titles: set[tuple[str, Optional[str]]] = set()
    descriptions: set[tuple[str, Optional[str]]] = set()
    flat_languages: set[str] = set()
    language_nodes: list[Term] = []
    resource_type: Optional[ResourceType] = None
    rights_raw: Optional[str] = None
    rights_iri: Optional[str] = None
    creators: set[str] = set()
    subjects: set[str] = set()
    contact_point: Optional[str] = None
    access_urls: set[str] = set()
    see_also: set[str] = set()
    extras: dict[str, str] = {}

    extra_by_iri = {iri: key for key, iri in vocab.EXTRA_PROPERTIES.items()}

    # sorted for determinism: graphs are sets, and single-valued fields should
    # not depend on hash iteration order
    root_triples = sorted(
        graph.triples(subject=rec),
        key=lambda t: (t.predicate.value, term_to_ntriples(t.object)),
    )
    for t in root_triples:
        pred = t.predicate.value
        obj = t.object
        if pred == vocab.RDF_TYPE:
            continue
        if pred == props[FacetKind.TITLE] and isinstance(obj, Literal):
            titles.add((obj.lexical, obj.lang))
        elif pred == props[FacetKind.DESCRIPTION] and isinstance(obj, Literal):
            descriptions.add((obj.lexical, obj.lang))
        elif pred == props[FacetKind.LANGUAGE] and isinstance(obj, Literal):
            flat_languages.add(obj.lexical)
        elif pred == vocab.MS_LANGUAGE_REF:
            language_nodes.append(obj)
        elif pred == props[FacetKind.TYPE] and isinstance(obj, Literal):
            resource_type = ResourceType.from_label(obj.lexical)
        elif pred == props[FacetKind.RIGHTS]:
            if isinstance(obj, Literal):
                rights_raw = obj.lexical
            elif isinstance(obj, Iri):
                rights_iri = obj.value
        elif pred == props[FacetKind.CREATOR] and isinstance(obj, Literal):
            creators.add(obj.lexical)
        elif pred == props[FacetKind.SUBJECT] and isinstance(obj, Literal):
            subjects.add(obj.lexical)
        elif pred == props[FacetKind.CONTACT_POINT] and isinstance(obj, Literal):
            contact_point = obj.lexical
        elif pred == props[FacetKind.ACCESS_URL] and isinstance(obj, Iri):
            access_urls.add(obj.value)
        elif pred == vocab.DCAT_DISTRIBUTION:
            for dt in graph.triples(subject=obj, predicate=Iri(vocab.DCAT_ACCESS_URL)):
                if isinstance(dt.object, Iri):
                    access_urls.add(dt.object.value)
        elif pred == vocab.RDFS_SEE_ALSO and isinstance(obj, Iri):
            see_also.add(obj.value)
        elif pred in extra_by_iri and isinstance(obj, Literal):
            extras[extra_by_iri[pred]] = obj.lexical
        else:
            if diagnostics is not None:
                diagnostics.unknown_predicates += 1
                diagnostics.unknown_iris.append(pred)

    languages: list[LanguageRef] = []
    covered: set[str] = set()
    for node in language_nodes:
        raw = None
        code = None
        confidence = None
        for nt in graph.triples(subject=node):
            if nt.predicate.value == vocab.RDF_VALUE and isinstance(nt.object, Literal):
                raw = nt.object.lexical
            elif nt.predicate.value == vocab.MS_ISO639_3 and isinstance(nt.object, Literal):
                code = nt.object.lexical
            elif nt.predicate.value == vocab.MS_CONFIDENCE and isinstance(nt.object, Literal):
                try:
                    confidence = float(nt.object.lexical)
                except ValueError:
                    confidence = None
        if raw is None:
            continue
        covered.add(raw)
        if code is not None:
            covered.add(code)
            # a bare code assertion without a stored confidence counts as exact
            if confidence is None or confidence <= 0.0:
                confidence = 1.0
            languages.append(LanguageRef(raw, code, confidence))
        else:
            languages.append(LanguageRef(raw))
    # flat language literals with no structured node (hand-authored graphs)
    for raw in flat_languages - covered:
        languages.append(LanguageRef(raw))
    languages.sort(key=lambda ref: (ref.raw, ref.iso639_3 or "", ref.confidence))

    rights = None
    if rights_raw is not None or rights_iri is not None:
        rights = RightsRef(rights_raw if rights_raw is not None else "", rights_iri)

    return CatalogRecord(
        id=record_id,
        source_repo=source_repo,
        titles=_sorted_texts(titles),
        descriptions=_sorted_texts(descriptions),
        languages=languages,
        resource_type=resource_type,
        rights=rights,
        creators=sorted(creators),
        subjects=sorted(subjects),
        contact_point=contact_point,
        access_urls=sorted(access_urls),
        see_also=sorted(see_also),
        extras=extras,
    )


def facet_values(record: CatalogRecord, facet: FacetKind) -> list[str]:
    """The record's values for one facet, in field order; [] when unset."""
    if facet is FacetKind.TITLE:
        return [text for text, _ in record.titles]
    if facet is FacetKind.DESCRIPTION:
        return [text for text, _ in record.descriptions]
    if facet is FacetKind.LANGUAGE:
        return [ref.raw for ref in record.languages]
    if facet is FacetKind.TYPE:
        return [record.resource_type.label] if record.resource_type else []
    if facet is FacetKind.RIGHTS:
        return [record.rights.raw] if record.rights is not None else []
    if facet is FacetKind.CREATOR:
        return list(record.creators)
    if facet is FacetKind.SUBJECT:
        return list(record.subjects)
    if facet is FacetKind.CONTACT_POINT:
        return [record.contact_point] if record.contact_point is not None else []
    if facet is FacetKind.ACCESS_URL:
        return list(record.access_urls)
    raise ValueError(f"unknown facet {facet!r}")


def records_equal(a: CatalogRecord, b: CatalogRecord) -> bool:
    """Field equality with list fields compared as multisets."""
    def norm(record: CatalogRecord):
        return (
            record.id,
            record.source_repo,
            sorted(record.titles, key=lambda p: (p[0], p[1] or "")),
            sorted(record.descriptions, key=lambda p: (p[0], p[1] or "")),
            sorted((ref.raw, ref.iso639_3 or "", ref.confidence) for ref in record.languages),
            record.resource_type,
            record.rights,
            sorted(record.creators),
            sorted(record.subjects),
            record.contact_point,
            sorted(record.access_urls),
            sorted(record.see_also),
            dict(record.extras),
        )

    return norm(a) == norm(b)
