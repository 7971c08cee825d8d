"""Language-identifier normalization against an embedded ISO 639-3 table.

Resolution order: exact code match (639-3 then 639-1, case-insensitive),
exact name or alternate-name match, then the best similarity score over
every name in the table. A score below the threshold leaves the label
unassigned. Ties break to the lexicographically smallest code so runs are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional, Sequence

from ..records import LanguageRef
from .similarity import METRIC_DICE, metric_similarity

DEFAULT_THRESHOLD = 0.78


class TableFormatError(ValueError):
    pass


class EmptyGold(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class LanguageEntry:
    iso639_3: str
    iso639_1: Optional[str]
    names: tuple[str, ...]
    alt_names: tuple[str, ...]

    def all_names(self) -> tuple[str, ...]:
        return self.names + self.alt_names


class LanguageTable:
    def __init__(self, entries: Iterable[LanguageEntry]) -> None:
        self.entries: list[LanguageEntry] = list(entries)
        self._by_code3: dict[str, LanguageEntry] = {}
        self._by_code1: dict[str, LanguageEntry] = {}
        self._by_name: dict[str, list[str]] = {}
        for entry in self.entries:
            if not entry.names:
                raise TableFormatError(f"entry {entry.iso639_3} has no names")
            if entry.iso639_3 in self._by_code3:
                raise TableFormatError(f"duplicate code {entry.iso639_3}")
            self._by_code3[entry.iso639_3] = entry
            if entry.iso639_1:
                self._by_code1[entry.iso639_1] = entry
            for name in entry.all_names():
                self._by_name.setdefault(name.lower(), []).append(entry.iso639_3)

    def __len__(self) -> int:
        return len(self.entries)

    def lookup_code(self, code: str) -> Optional[LanguageEntry]:
        folded = code.lower()
        if len(folded) == 3 and folded in self._by_code3:
            return self._by_code3[folded]
        if len(folded) == 2 and folded in self._by_code1:
            return self._by_code1[folded]
        return None

    def lookup_name(self, name: str) -> Optional[str]:
        codes = self._by_name.get(name.lower())
        return min(codes) if codes else None

    def has_code(self, code: str) -> bool:
        return code in self._by_code3

    def primary_name(self, code: str) -> str:
        return self._by_code3[code].names[0]

    @classmethod
    def from_tsv(cls, text: str) -> "LanguageTable":
        entries = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            line = line.strip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise TableFormatError(f"line {line_no}: expected 4 tab-separated columns")
            code3, code1, names, alts = (p.strip() for p in parts)
            entries.append(
                LanguageEntry(
                    iso639_3=code3.lower(),
                    iso639_1=None if code1 in ("-", "") else code1.lower(),
                    names=tuple(n.strip() for n in names.split("|") if n.strip()),
                    alt_names=tuple(a.strip() for a in alts.split("|") if a.strip() and a != "-"),
                )
            )
        return cls(entries)

    @classmethod
    def embedded(cls) -> "LanguageTable":
        text = resources.files("lrcat.harmonize").joinpath("data/languages.tsv").read_text("utf-8")
        return cls.from_tsv(text)


def normalize_language(
    raw: str,
    table: LanguageTable,
    metric: str = METRIC_DICE,
    threshold: float = DEFAULT_THRESHOLD,
) -> LanguageRef:
    """Map one raw language label to a LanguageRef.

    Exact code and exact name matches get confidence 1.0; fuzzy matches get
    the similarity score; anything under the threshold stays unassigned.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    label = raw.strip()
    if not label:
        return LanguageRef(raw)

    entry = table.lookup_code(label)
    if entry is not None:
        return LanguageRef(raw, entry.iso639_3, 1.0)

    exact = table.lookup_name(label)
    if exact is not None:
        return LanguageRef(raw, exact, 1.0)

    best_score = 0.0
    best_code: Optional[str] = None
    for candidate in table.entries:
        top = max(metric_similarity(metric, label, name) for name in candidate.all_names())
        if top > best_score or (top == best_score and best_code is not None and candidate.iso639_3 < best_code):
            best_score = top
            best_code = candidate.iso639_3
    if best_code is not None and best_score >= threshold:
        return LanguageRef(raw, best_code, best_score)
    return LanguageRef(raw)


@dataclass(frozen=True, slots=True)
class GoldLabel:
    raw: str
    expected: str
    occurrences: int = 1


def evaluate_mapping_accuracy(
    gold: Sequence[GoldLabel],
    table: LanguageTable,
    metric: str = METRIC_DICE,
    threshold: float = DEFAULT_THRESHOLD,
) -> tuple[float, float, list[int]]:
    """Label accuracy over distinct labels, occurrence-weighted instance
    accuracy, and the per-label occurrence weights actually used."""
    if not gold:
        raise EmptyGold("gold set is empty")
    correct_labels = 0
    correct_instances = 0
    total_instances = 0
    weights = []
    for item in gold:
        ref = normalize_language(item.raw, table, metric, threshold)
        hit = ref.iso639_3 == item.expected
        weights.append(item.occurrences)
        total_instances += item.occurrences
        if hit:
            correct_labels += 1
            correct_instances += item.occurrences
    return correct_labels / len(gold), correct_instances / total_instances, weights


def load_gold_tsv(text: str) -> list[GoldLabel]:
    """Gold fixture rows: raw <TAB> expected-code <TAB> occurrences."""
    gold = []
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        raw, expected, occurrences = line.split("\t")
        gold.append(GoldLabel(raw, expected.strip(), int(occurrences)))
    return gold
