"""Repair of dirty IRI values from source metadata.

Sources ship URL-ish values with unknown schemes, embedded spaces, or
relative references. ``repair_term`` is total: clean absolute IRIs pass
through, everything else is either resolved against the record's base or
downgraded to a plain literal, and every downgrade is recorded with a named
repair kind.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional
from urllib.parse import urljoin

from ..rdf import Iri, Literal, Term, TermError

# Schemes a source may legitimately use for resolvable-ish identifiers.
ALLOWED_SCHEMES = ("http", "https", "ftp", "urn", "doi", "hdl")

REPAIR_SCHEME = "SchemeDowngrade"
REPAIR_WHITESPACE = "WhitespaceDowngrade"
REPAIR_RELATIVE_RESOLVED = "RelativeResolved"
REPAIR_RELATIVE_DOWNGRADE = "RelativeDowngrade"

_SCHEME_RE = re.compile(r"^([A-Za-z][A-Za-z0-9+.\-]*):")


def repair_term(raw: str, base: Optional[str] = None) -> tuple[Term, Optional[str]]:
    """Turn a raw IRI-intended string into a Term, recording any repair."""
    value = raw.strip()
    if not value:
        return Literal(raw), REPAIR_RELATIVE_DOWNGRADE
    if re.search(r"\s", value):
        return Literal(raw), REPAIR_WHITESPACE
    m = _SCHEME_RE.match(value)
    if m:
        if m.group(1).lower() in ALLOWED_SCHEMES:
            try:
                return Iri(value), None
            except TermError:
                return Literal(raw), REPAIR_SCHEME
        return Literal(raw), REPAIR_SCHEME
    # relative reference
    if base:
        resolved = urljoin(base, value)
        try:
            return Iri(resolved), REPAIR_RELATIVE_RESOLVED
        except TermError:
            return Literal(raw), REPAIR_RELATIVE_DOWNGRADE
    return Literal(raw), REPAIR_RELATIVE_DOWNGRADE


@dataclass(slots=True)
class IngestReport:
    records_read: int = 0
    records_emitted: int = 0
    repairs: list[tuple[str, str, str]] = field(default_factory=list)  # (record id, kind, detail)
    failures: list[tuple[str, str]] = field(default_factory=list)  # (location, reason)

    def add_repair(self, record_id: str, kind: str, detail: str) -> None:
        if not kind:
            raise ValueError("repair kind must be named")
        self.repairs.append((record_id, kind, detail))

    def add_failure(self, location: str, reason: str) -> None:
        self.failures.append((location, reason))

    def merge(self, other: "IngestReport") -> None:
        self.records_read += other.records_read
        self.records_emitted += other.records_emitted
        self.repairs.extend(other.repairs)
        self.failures.extend(other.failures)

    def check_conservation(self) -> bool:
        return self.records_read == self.records_emitted + len(self.failures)

    def to_tsv(self) -> str:
        lines = [
            f"records-read\t{self.records_read}",
            f"records-emitted\t{self.records_emitted}",
            f"failures\t{len(self.failures)}",
            f"repairs\t{len(self.repairs)}",
        ]
        for record_id, kind, detail in self.repairs:
            lines.append(f"repair\t{record_id}\t{kind}\t{detail}")
        for location, reason in self.failures:
            lines.append(f"failure\t{location}\t{reason}")
        return "\n".join(lines) + "\n"
