"""Rights harmonization against a license registry.

A raw value that is itself one of the registry IRIs maps directly; a raw
value equal (case-insensitively) to a registered license name maps to that
license's IRI; everything else keeps the free-text value with no IRI, which
mirrors how unevenly sources record licensing.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..records import RightsRef
from .languages import TableFormatError


@dataclass(frozen=True, slots=True)
class LicenseEntry:
    iri: str
    names: tuple[str, ...]


class LicenseRegistry:
    def __init__(self, entries: list[LicenseEntry]) -> None:
        self.entries = entries
        self._iris = {e.iri for e in entries}
        self._by_name: dict[str, str] = {}
        for entry in entries:
            for name in entry.names:
                self._by_name.setdefault(name.lower(), entry.iri)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, iri: str) -> bool:
        return iri in self._iris

    @classmethod
    def from_tsv(cls, text: str) -> "LicenseRegistry":
        entries = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise TableFormatError(f"line {line_no}: expected 2 tab-separated columns")
            iri, names = parts
            entries.append(LicenseEntry(iri.strip(), tuple(n.strip() for n in names.split("|") if n.strip())))
        return cls(entries)

    @classmethod
    def embedded(cls) -> "LicenseRegistry":
        text = resources.files("lrcat.harmonize").joinpath("data/licenses.tsv").read_text("utf-8")
        return cls.from_tsv(text)

    def normalize(self, raw: str) -> RightsRef:
        value = raw.strip()
        if value in self._iris:
            return RightsRef(raw, value)
        iri = self._by_name.get(value.lower())
        return RightsRef(raw, iri)


def normalize_rights(raw: str, registry: LicenseRegistry) -> RightsRef:
    return registry.normalize(raw)
