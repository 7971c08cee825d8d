"""Resource-type classification with a local weighted keyword gazetteer.

The external entity-linking service the classification could have leaned on
is not reproducible at desk scale, so a transparent gazetteer over title,
description, and subject text does the job: each keyword hit adds its
weight to its type, the best-scoring type wins, and ties are left for
curation (None). An explicit type from the source always wins.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from ..records import CatalogRecord, ResourceType
from .languages import TableFormatError


@dataclass(frozen=True, slots=True)
class GazetteerEntry:
    keyword: str
    resource_type: ResourceType
    weight: int


class TypeGazetteer:
    def __init__(self, entries: list[GazetteerEntry]) -> None:
        self.entries = entries
        types = {e.resource_type for e in entries}
        for required in ("Corpus", "Lexical Conceptual Resource", "Tool/Service"):
            if ResourceType(required) not in types:
                raise TableFormatError(f"gazetteer has no keywords for {required!r}")
        self._patterns = [
            (re.compile(r"(?<!\w)" + re.escape(e.keyword.lower()) + r"(?!\w)"), e)
            for e in entries
        ]

    def score(self, text: str) -> dict[ResourceType, int]:
        folded = text.lower()
        scores: dict[ResourceType, int] = {}
        for pattern, entry in self._patterns:
            hits = len(pattern.findall(folded))
            if hits:
                scores[entry.resource_type] = scores.get(entry.resource_type, 0) + hits * entry.weight
        return scores

    @classmethod
    def from_tsv(cls, text: str) -> "TypeGazetteer":
        entries = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise TableFormatError(f"line {line_no}: expected 3 tab-separated columns")
            keyword, label, weight = parts
            entries.append(GazetteerEntry(keyword.strip(), ResourceType.from_label(label), int(weight)))
        return cls(entries)

    @classmethod
    def embedded(cls) -> "TypeGazetteer":
        text = resources.files("lrcat.harmonize").joinpath("data/type_gazetteer.tsv").read_text("utf-8")
        return cls.from_tsv(text)


def classify_type(record: CatalogRecord, gazetteer: TypeGazetteer) -> Optional[ResourceType]:
    """Pick the record's resource type; None when evidence is tied or absent.

    An explicit source-provided type always wins over keyword evidence.
    """
    if record.resource_type is not None:
        return record.resource_type

    text_parts = [text for text, _ in record.titles]
    text_parts.extend(text for text, _ in record.descriptions)
    text_parts.extend(record.subjects)
    scores = gazetteer.score("\n".join(text_parts))
    if not scores:
        return None
    ranked = sorted(scores.items(), key=lambda kv: -kv[1])
    if len(ranked) > 1 and ranked[0][1] == ranked[1][1]:
        return None
    return ranked[0][0]
