"""Source readers: concatenated-XML catalog exports and DCAT-style JSON."""

from __future__ import annotations

import gzip
import hashlib
import json
import re
import xml.etree.ElementTree as ET
from typing import Optional, Sequence

from ..rdf import Iri
from ..records import CatalogRecord, LanguageRef, ResourceType, RightsRef, mint_record_id
from ..vocab import DEFAULT_BASE, EXTRA_KEYS, FacetKind
from .repair import IngestReport, repair_term
from .rules import MappingRuleSet, TARGET_SEE_ALSO

_XML_DECL_RE = re.compile(rb"<\?xml[^>]*\?>")


class XmlStreamError(ValueError):
    """Stream-level XML failure; carries the parser's location message."""


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _maybe_gunzip(data: bytes) -> bytes:
    if data[:2] == b"\x1f\x8b":
        return gzip.decompress(data)
    return data


def _wrap_records(data: bytes) -> ET.Element:
    """Parse a stream of concatenated XML documents as one synthetic tree."""
    cleaned = _XML_DECL_RE.sub(b"", _maybe_gunzip(data))
    wrapped = b"<lrcat-stream>" + cleaned + b"</lrcat-stream>"
    try:
        return ET.fromstring(wrapped)
    except ET.ParseError as exc:
        raise XmlStreamError(str(exc)) from None


class _FieldCollector:
    """Accumulates rule-target values into CatalogRecord fields."""

    def __init__(self, report: IngestReport, base_url: Optional[str]) -> None:
        self.report = report
        self.base_url = base_url
        self.titles: list[tuple[str, Optional[str]]] = []
        self.descriptions: list[tuple[str, Optional[str]]] = []
        self.languages: list[LanguageRef] = []
        self.resource_type: Optional[ResourceType] = None
        self.rights: Optional[RightsRef] = None
        self.creators: list[str] = []
        self.subjects: list[str] = []
        self.contact_point: Optional[str] = None
        self.access_urls: list[str] = []
        self.see_also: list[str] = []
        self.extras: dict[str, str] = {}
        self.pending_repairs: list[tuple[str, str]] = []
        self.matched = False

    def _add_unique(self, values: list, new) -> None:
        if new not in values:
            values.append(new)

    def _add_url(self, target_list: list[str], value: str) -> None:
        term, repair = repair_term(value, self.base_url)
        if repair is not None:
            self.pending_repairs.append((repair, value))
        if isinstance(term, Iri):
            self._add_unique(target_list, term.value)

    def add(self, target: str, values: Sequence[str]) -> None:
        if not values:
            return
        self.matched = True
        for value in values:
            if target == FacetKind.TITLE.value:
                self._add_unique(self.titles, (value, None))
            elif target == FacetKind.DESCRIPTION.value:
                self._add_unique(self.descriptions, (value, None))
            elif target == FacetKind.LANGUAGE.value:
                ref = LanguageRef(value)
                self._add_unique(self.languages, ref)
            elif target == FacetKind.TYPE.value:
                if self.resource_type is None:
                    self.resource_type = ResourceType.from_label(value)
            elif target == FacetKind.RIGHTS.value:
                if self.rights is None:
                    self.rights = RightsRef(value)
            elif target == FacetKind.CREATOR.value:
                self._add_unique(self.creators, value)
            elif target == FacetKind.SUBJECT.value:
                self._add_unique(self.subjects, value)
            elif target == FacetKind.CONTACT_POINT.value:
                if self.contact_point is None:
                    self.contact_point = value
            elif target == FacetKind.ACCESS_URL.value:
                self._add_url(self.access_urls, value)
            elif target == TARGET_SEE_ALSO:
                self._add_url(self.see_also, value)
            elif target in EXTRA_KEYS:
                self.extras.setdefault(target, value)
            else:
                raise ValueError(f"unhandled rule target {target!r}")

    def build(self, record_id: str, source_repo: str) -> CatalogRecord:
        for kind, detail in self.pending_repairs:
            self.report.add_repair(record_id, kind, detail)
        return CatalogRecord(
            id=record_id,
            source_repo=source_repo,
            titles=self.titles,
            descriptions=self.descriptions,
            languages=self.languages,
            resource_type=self.resource_type,
            rights=self.rights,
            creators=self.creators,
            subjects=self.subjects,
            contact_point=self.contact_point,
            access_urls=self.access_urls,
            see_also=self.see_also,
            extras=self.extras,
        )


def _unique_id(base_id: str, used: set[str]) -> str:
    candidate = base_id
    suffix = 2
    while candidate in used:
        candidate = f"{base_id}-{suffix}"
        suffix += 1
    used.add(candidate)
    return candidate


def ingest_xml(
    data: bytes,
    ruleset: MappingRuleSet,
    source_repo: str,
    root_tags: Optional[Sequence[str]] = None,
    base: str = DEFAULT_BASE,
    source_base_url: Optional[str] = None,
) -> tuple[list[CatalogRecord], IngestReport]:
    """Apply a ruleset to a stream of concatenated XML records.

    Records whose root tag is not one of ``root_tags`` (when given), and
    records no rule matched, are counted as failures rather than silently
    dropped. A malformed stream aborts with the parser's location.
    """
    report = IngestReport()
    records: list[CatalogRecord] = []
    used_ids: set[str] = set()
    tree = _wrap_records(data)
    allowed = set(root_tags) if root_tags else None
    for index, element in enumerate(tree):
        report.records_read += 1
        location = f"record[{index}] <{_local(element.tag)}>"
        if allowed is not None and _local(element.tag) not in allowed:
            report.add_failure(location, f"unexpected root tag {_local(element.tag)!r}")
            continue
        collector = _FieldCollector(report, source_base_url)
        for rule in ruleset.rules:
            values = rule.apply_transform(rule.selector.evaluate(element))
            collector.add(rule.target, values)
        if not collector.matched:
            report.add_failure(location, "no rule matched")
            continue
        source_key = collector.see_also[0] if collector.see_also else hashlib.sha256(
            ET.tostring(element)
        ).hexdigest()
        record_id = _unique_id(mint_record_id(base, source_repo, source_key), used_ids)
        records.append(collector.build(record_id, source_repo))
        report.records_emitted += 1
    return records, report


def _string_list(value) -> list[str]:
    """Tolerant reading of JSON fields that may be str, list, or dicts."""
    if value is None:
        return []
    if isinstance(value, str):
        return [value] if value.strip() else []
    if isinstance(value, list):
        out = []
        for item in value:
            if isinstance(item, str) and item.strip():
                out.append(item)
            elif isinstance(item, dict):
                name = item.get("name") or item.get("display_name") or item.get("title")
                if isinstance(name, str) and name.strip():
                    out.append(name)
        return out
    return []


def ingest_dcat_json(
    data: bytes,
    source_repo: str,
    base: str = DEFAULT_BASE,
) -> tuple[list[CatalogRecord], IngestReport]:
    """Direct field mapping from a JSON array of DCAT-style dataset objects."""
    report = IngestReport()
    records: list[CatalogRecord] = []
    used_ids: set[str] = set()
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"not a JSON array of datasets: {exc}") from None
    if not isinstance(doc, list):
        raise ValueError("not a JSON array of datasets")

    for index, obj in enumerate(doc):
        report.records_read += 1
        location = f"dataset[{index}]"
        if not isinstance(obj, dict):
            report.add_failure(location, "not an object")
            continue
        title = obj.get("title")
        if not isinstance(title, str) or not title.strip():
            report.add_failure(location, "missing title")
            continue

        collector = _FieldCollector(report, None)
        collector.add(FacetKind.TITLE.value, [title.strip()])
        description = obj.get("description") or obj.get("notes")
        if isinstance(description, str) and description.strip():
            collector.add(FacetKind.DESCRIPTION.value, [description.strip()])
        license_value = obj.get("license") or obj.get("license_title")
        if isinstance(license_value, str) and license_value.strip():
            collector.add(FacetKind.RIGHTS.value, [license_value.strip()])
        collector.add(FacetKind.SUBJECT.value, _string_list(obj.get("tags")))
        collector.add(FacetKind.CREATOR.value, _string_list(obj.get("author") or obj.get("creator")))
        collector.add(FacetKind.LANGUAGE.value, _string_list(obj.get("language") or obj.get("languages")))
        resources = obj.get("resources")
        if isinstance(resources, list):
            urls = [r.get("url") for r in resources if isinstance(r, dict) and isinstance(r.get("url"), str)]
            collector.add(FacetKind.ACCESS_URL.value, [u for u in urls if u.strip()])
        landing = obj.get("url")
        if isinstance(landing, str) and landing.strip():
            collector.add(TARGET_SEE_ALSO, [landing.strip()])

        source_key = str(obj.get("id") or obj.get("name") or landing or title)
        record_id = _unique_id(mint_record_id(base, source_repo, source_key), used_ids)
        records.append(collector.build(record_id, source_repo))
        report.records_emitted += 1
    return records, report
