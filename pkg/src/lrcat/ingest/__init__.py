"""Rule-driven conversion of heterogeneous source records into CatalogRecords."""

from __future__ import annotations

from .repair import (
    ALLOWED_SCHEMES,
    IngestReport,
    REPAIR_RELATIVE_DOWNGRADE,
    REPAIR_RELATIVE_RESOLVED,
    REPAIR_SCHEME,
    REPAIR_WHITESPACE,
    repair_term,
)
from .rules import (
    MappingRule,
    MappingRuleSet,
    RuleSyntaxError,
    Selector,
    TARGET_SEE_ALSO,
    load_ruleset,
    parse_selector,
)
from .sources import XmlStreamError, ingest_dcat_json, ingest_xml

__all__ = [
    "ALLOWED_SCHEMES",
    "IngestReport",
    "MappingRule",
    "MappingRuleSet",
    "REPAIR_RELATIVE_DOWNGRADE",
    "REPAIR_RELATIVE_RESOLVED",
    "REPAIR_SCHEME",
    "REPAIR_WHITESPACE",
    "RuleSyntaxError",
    "Selector",
    "TARGET_SEE_ALSO",
    "XmlStreamError",
    "ingest_dcat_json",
    "ingest_xml",
    "load_ruleset",
    "parse_selector",
    "repair_term",
]
