"""Duplicate detection over normalized titles and URLs.

Matching is exact on normalized keys; clusters are the connected components
of the pairwise-match relation (union-find), split into intra-repository
and inter-repository scopes. Empty keys never match anything, so a pile of
untitled records cannot collapse into one giant cluster.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence
from urllib.parse import urlsplit, urlunsplit

from .records import CatalogRecord, LanguageRef, RightsRef

STRATEGY_TITLE = "title"
STRATEGY_URL = "url"
STRATEGY_BOTH = "both"
STRATEGIES = (STRATEGY_TITLE, STRATEGY_URL, STRATEGY_BOTH)

VERDICT_CORRECT = "Correct"
VERDICT_UNCLEAR = "Unclear"
VERDICT_INCORRECT = "Incorrect"

_WS_RE = re.compile(r"\s+")
_DEFAULT_PORTS = {"http": "80", "https": "443", "ftp": "21"}


class InvalidUrl(ValueError):
    pass


class PairNotClustered(ValueError):
    pass


def normalize_title(raw: str) -> str:
    """Lowercase, punctuation to spaces, whitespace collapsed, trimmed."""
    out = []
    for c in raw.lower():
        out.append(" " if unicodedata.category(c).startswith("P") else c)
    return _WS_RE.sub(" ", "".join(out)).strip()


def normalize_url(raw: str) -> str:
    """Canonical URL key: lowercase scheme and host, default port and
    fragment dropped, one trailing slash stripped, query preserved."""
    try:
        parts = urlsplit(raw.strip())
    except ValueError as exc:
        raise InvalidUrl(str(exc)) from None
    if not parts.scheme or not parts.netloc:
        raise InvalidUrl(f"not an absolute URL: {raw!r}")
    scheme = parts.scheme.lower()
    host = parts.hostname or ""
    port = parts.port
    netloc = host.lower()
    if port is not None and str(port) != _DEFAULT_PORTS.get(scheme):
        netloc = f"{netloc}:{port}"
    path = parts.path
    if path.endswith("/"):
        path = path[:-1]
    return urlunsplit((scheme, netloc, path, parts.query, ""))


@dataclass(frozen=True, slots=True)
class ClusterScope:
    """Repositories a cluster's members come from; one repo means intra."""

    repos: tuple[str, ...]

    @property
    def is_intra(self) -> bool:
        return len(self.repos) == 1

    def label(self) -> str:
        if self.is_intra:
            return f"intra:{self.repos[0]}"
        return "inter:" + "+".join(self.repos)


@dataclass(frozen=True, slots=True)
class DuplicateCluster:
    member_ids: tuple[str, ...]  # sorted, >= 2 members
    strategy: str
    scope: ClusterScope


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        parent = self.parent.setdefault(x, x)
        while parent != x:
            self.parent[x] = parent = self.parent[parent]
            x = parent
            parent = self.parent[x]
        return x

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _title_keys(record: CatalogRecord) -> set[str]:
    return {key for key in (normalize_title(text) for text, _ in record.titles) if key}


def _url_keys(record: CatalogRecord) -> set[str]:
    keys = set()
    for url in record.access_urls:
        try:
            keys.add(normalize_url(url))
        except InvalidUrl:
            continue
    return keys


def find_duplicates(records: Sequence[CatalogRecord], strategy: str) -> list[DuplicateCluster]:
    """Connected components of the pairwise-match relation for a strategy."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    by_id = {r.id: r for r in records}
    uf = _UnionFind()
    for record in records:
        uf.find(record.id)

    if strategy in (STRATEGY_TITLE, STRATEGY_URL):
        key_fn = _title_keys if strategy == STRATEGY_TITLE else _url_keys
        buckets: dict[str, list[str]] = {}
        for record in records:
            for key in key_fn(record):
                buckets.setdefault(key, []).append(record.id)
        for ids in buckets.values():
            first = ids[0]
            for other in ids[1:]:
                uf.union(first, other)
    else:
        # pair must share a title key AND a url key; walk the smaller
        # url buckets and pairwise-check title overlap inside them
        url_buckets: dict[str, list[str]] = {}
        title_cache = {r.id: _title_keys(r) for r in records}
        for record in records:
            for key in _url_keys(record):
                url_buckets.setdefault(key, []).append(record.id)
        for ids in url_buckets.values():
            for i, a in enumerate(ids):
                for b in ids[i + 1 :]:
                    if title_cache[a] & title_cache[b]:
                        uf.union(a, b)

    components: dict[str, list[str]] = {}
    for record_id in by_id:
        components.setdefault(uf.find(record_id), []).append(record_id)

    clusters = []
    for members in components.values():
        if len(members) < 2:
            continue
        members = tuple(sorted(members))
        repos = tuple(sorted({by_id[m].source_repo for m in members}))
        clusters.append(DuplicateCluster(members, strategy, ClusterScope(repos)))
    clusters.sort(key=lambda c: c.member_ids[0])
    return clusters


def _longest(values: Iterable[str]) -> Optional[str]:
    best: Optional[str] = None
    for value in values:
        if value and (best is None or len(value) > len(best)):
            best = value
    return best


def merge_cluster(cluster: DuplicateCluster, records: dict[str, CatalogRecord]) -> CatalogRecord:
    """Collapse a cluster into one survivor record.

    The lexicographically smallest member id survives; multi-valued fields
    are unioned, single-valued fields take the longest non-empty value, and
    every other member id is kept as an equivalence backlink in seeAlso.
    """
    members = [records[m] for m in cluster.member_ids]
    survivor_id = cluster.member_ids[0]
    survivor = records[survivor_id]

    def union_simple(getter) -> list[str]:
        seen: dict[str, None] = {}
        for member in members:
            for value in getter(member):
                seen.setdefault(value, None)
        return sorted(seen)

    title_pool = [(text, lang) for member in members for text, lang in member.titles]
    best_title = _longest(text for text, _ in title_pool)
    titles = [next((t for t in title_pool if t[0] == best_title))] if best_title is not None else []

    desc_pool = [(text, lang) for member in members for text, lang in member.descriptions]
    best_desc = _longest(text for text, _ in desc_pool)
    descriptions = [next((d for d in desc_pool if d[0] == best_desc))] if best_desc is not None else []

    languages: list[LanguageRef] = []
    seen_langs: set[tuple] = set()
    for member in members:
        for ref in member.languages:
            key = (ref.raw, ref.iso639_3)
            if key not in seen_langs:
                seen_langs.add(key)
                languages.append(ref)
    languages.sort(key=lambda ref: (ref.raw, ref.iso639_3 or ""))

    rights: Optional[RightsRef] = None
    for member in members:
        if member.rights is not None and member.rights.raw:
            if rights is None or len(member.rights.raw) > len(rights.raw):
                rights = member.rights
    if rights is None:
        rights = next((m.rights for m in members if m.rights is not None), None)

    resource_type = survivor.resource_type
    if resource_type is None:
        resource_type = next((m.resource_type for m in members if m.resource_type is not None), None)

    see_also = union_simple(lambda m: m.see_also)
    for member_id in cluster.member_ids[1:]:
        if member_id not in see_also:
            see_also.append(member_id)

    extras: dict[str, str] = {}
    for member in members:
        for key, value in member.extras.items():
            current = extras.get(key, "")
            if value and len(value) > len(current):
                extras[key] = value

    return CatalogRecord(
        id=survivor_id,
        source_repo=survivor.source_repo,
        titles=titles,
        descriptions=descriptions,
        languages=languages,
        resource_type=resource_type,
        rights=rights,
        creators=union_simple(lambda m: m.creators),
        subjects=union_simple(lambda m: m.subjects),
        contact_point=_longest(m.contact_point or "" for m in members),
        access_urls=union_simple(lambda m: m.access_urls),
        see_also=see_also,
        extras=extras,
    )


def merge_all(records: Sequence[CatalogRecord], clusters: Sequence[DuplicateCluster]) -> list[CatalogRecord]:
    """Apply merge_cluster over every cluster; non-members pass through."""
    by_id = {r.id: r for r in records}
    merged_away: set[str] = set()
    out: dict[str, CatalogRecord] = {}
    for cluster in clusters:
        merged = merge_cluster(cluster, by_id)
        out[merged.id] = merged
        merged_away.update(cluster.member_ids[1:])
    for record in records:
        if record.id not in merged_away and record.id not in out:
            out[record.id] = record
    return [out[key] for key in sorted(out)]


@dataclass(frozen=True, slots=True)
class PrecisionSampleRow:
    id_a: str
    id_b: str
    verdict: str


@dataclass(slots=True)
class PrecisionReport:
    correct: int
    unclear: int
    incorrect: int

    @property
    def precision(self) -> float:
        judged = self.correct + self.incorrect
        return self.correct / judged if judged else 1.0


def evaluate_precision(
    sample: Sequence[PrecisionSampleRow], clusters: Sequence[DuplicateCluster]
) -> PrecisionReport:
    """Precision = Correct / (Correct + Incorrect); Unclear pairs are judged
    but excluded from the denominator. Every sampled pair must actually be
    clustered together by the evaluated strategy."""
    membership: dict[str, int] = {}
    for idx, cluster in enumerate(clusters):
        for member in cluster.member_ids:
            membership[member] = idx
    counts = {VERDICT_CORRECT: 0, VERDICT_UNCLEAR: 0, VERDICT_INCORRECT: 0}
    for row in sample:
        if membership.get(row.id_a) is None or membership.get(row.id_a) != membership.get(row.id_b):
            raise PairNotClustered(f"pair ({row.id_a}, {row.id_b}) is not in one cluster")
        if row.verdict not in counts:
            raise ValueError(f"unknown verdict {row.verdict!r}")
        counts[row.verdict] += 1
    return PrecisionReport(counts[VERDICT_CORRECT], counts[VERDICT_UNCLEAR], counts[VERDICT_INCORRECT])


def load_precision_sample(text: str) -> list[PrecisionSampleRow]:
    """Sample file rows: idA <TAB> idB <TAB> verdict."""
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        id_a, id_b, verdict = line.split("\t")
        rows.append(PrecisionSampleRow(id_a.strip(), id_b.strip(), verdict.strip()))
    return rows


def cluster_report(clusters: Sequence[DuplicateCluster]) -> str:
    """Line-oriented report: strategy <TAB> scope <TAB> member ids.

    A trailing summary block reports duplicate keys three ways (pair count,
    extra copies, cluster count) since "number of duplicates" is ambiguous.
    """
    lines = []
    pair_count = 0
    extra_copies = 0
    for cluster in clusters:
        lines.append(f"{cluster.strategy}\t{cluster.scope.label()}\t{' '.join(cluster.member_ids)}")
        n = len(cluster.member_ids)
        pair_count += n * (n - 1) // 2
        extra_copies += n - 1
    lines.append(f"# clusters\t{len(clusters)}")
    lines.append(f"# duplicate-pairs\t{pair_count}")
    lines.append(f"# extra-copies\t{extra_copies}")
    return "\n".join(lines) + "\n"
