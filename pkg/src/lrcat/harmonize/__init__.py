"""Normalization of language identifiers, resource types, and rights."""

from __future__ import annotations

from ..records import CatalogRecord
from .languages import (
    DEFAULT_THRESHOLD,
    EmptyGold,
    GoldLabel,
    LanguageEntry,
    LanguageTable,
    evaluate_mapping_accuracy,
    load_gold_tsv,
    normalize_language,
)
from .rights import LicenseRegistry, normalize_rights
from .similarity import (
    BACKEND,
    METRIC_DICE,
    METRIC_LEVENSHTEIN,
    METRICS,
    dice_bigram,
    levenshtein_distance,
    levenshtein_sim,
    metric_similarity,
)
from .types import TypeGazetteer, classify_type

__all__ = [
    "BACKEND",
    "DEFAULT_THRESHOLD",
    "EmptyGold",
    "GoldLabel",
    "LanguageEntry",
    "LanguageTable",
    "LicenseRegistry",
    "METRIC_DICE",
    "METRIC_LEVENSHTEIN",
    "METRICS",
    "TypeGazetteer",
    "classify_type",
    "dice_bigram",
    "evaluate_mapping_accuracy",
    "harmonize_record",
    "levenshtein_distance",
    "levenshtein_sim",
    "load_gold_tsv",
    "normalize_language",
    "metric_similarity",
    "normalize_rights",
]


def harmonize_record(
    record: CatalogRecord,
    table: LanguageTable,
    gazetteer: TypeGazetteer,
    registry: LicenseRegistry,
    metric: str = METRIC_DICE,
    threshold: float = DEFAULT_THRESHOLD,
) -> CatalogRecord:
    """Normalize one record in place-free style: returns a new record with
    language codes assigned, the resource type classified, and rights
    aligned to the registry."""
    languages = [normalize_language(ref.raw, table, metric, threshold) for ref in record.languages]
    rights = normalize_rights(record.rights.raw, registry) if record.rights is not None else None
    harmonized = CatalogRecord(
        id=record.id,
        source_repo=record.source_repo,
        titles=list(record.titles),
        descriptions=list(record.descriptions),
        languages=languages,
        resource_type=record.resource_type,
        rights=rights,
        creators=list(record.creators),
        subjects=list(record.subjects),
        contact_point=record.contact_point,
        access_urls=list(record.access_urls),
        see_also=list(record.see_also),
        extras=dict(record.extras),
    )
    harmonized.resource_type = classify_type(harmonized, gazetteer)
    return harmonized
