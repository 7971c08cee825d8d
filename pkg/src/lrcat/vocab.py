"""Fixed vocabulary: property IRIs for the nine browse facets plus the
portal-owned namespace for the language-resource extras.

The facet-to-property table is constant data; the CLI can dump it for
reference (`lrcat vocab`).
"""

from __future__ import annotations

from enum import Enum

DCT = "http://purl.org/dc/terms/"
DCAT = "http://www.w3.org/ns/dcat#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"

# Portal-owned namespace holding the language-resource extras (contact,
# version, validation, usage) and the structured language-reference nodes.
MS = "http://lrcat.example.org/ns/metashare#"

DCAT_DATASET = DCAT + "Dataset"
DCAT_DISTRIBUTION_CLASS = DCAT + "Distribution"
DCAT_DISTRIBUTION = DCAT + "distribution"
DCAT_ACCESS_URL = DCAT + "accessURL"
DCAT_CONTACT_POINT = DCAT + "contactPoint"
RDFS_SEE_ALSO = RDFS + "seeAlso"
RDF_TYPE = RDF + "type"
RDF_VALUE = RDF + "value"

MS_LANGUAGE_REF = MS + "languageRef"
MS_ISO639_3 = MS + "iso639-3"
MS_CONFIDENCE = MS + "matchConfidence"

XSD_DOUBLE = XSD + "double"

DEFAULT_BASE = "http://lrcat.example.org"


class FacetKind(Enum):
    """The nine browse facets; each maps to exactly one property IRI."""

    TITLE = "Title"
    DESCRIPTION = "Description"
    LANGUAGE = "Language"
    TYPE = "Type"
    RIGHTS = "Rights"
    CREATOR = "Creator"
    SUBJECT = "Subject"
    CONTACT_POINT = "ContactPoint"
    ACCESS_URL = "AccessUrl"

    @classmethod
    def from_name(cls, name: str) -> "FacetKind":
        key = name.replace("_", "").replace(" ", "").replace("-", "").lower()
        for facet in cls:
            if facet.value.lower() == key:
                return facet
        raise KeyError(name)


FACET_PROPERTIES: dict[FacetKind, str] = {
    FacetKind.TITLE: DCT + "title",
    FacetKind.DESCRIPTION: DCT + "description",
    FacetKind.LANGUAGE: DCT + "language",
    FacetKind.TYPE: DCT + "type",
    FacetKind.RIGHTS: DCT + "rights",
    FacetKind.CREATOR: DCT + "creator",
    FacetKind.SUBJECT: DCT + "subject",
    FacetKind.CONTACT_POINT: DCAT_CONTACT_POINT,
    FacetKind.ACCESS_URL: DCAT_ACCESS_URL,
}

# Extras carried over from the language-resource schema; flat string values.
EXTRA_KEYS = ("contact", "version", "validation", "usage")
EXTRA_PROPERTIES = {key: MS + key for key in EXTRA_KEYS}

# Facet order used by the completeness report.
FACET_ORDER = (
    FacetKind.TITLE,
    FacetKind.DESCRIPTION,
    FacetKind.LANGUAGE,
    FacetKind.TYPE,
    FacetKind.RIGHTS,
    FacetKind.CREATOR,
    FacetKind.SUBJECT,
    FacetKind.CONTACT_POINT,
    FacetKind.ACCESS_URL,
)
