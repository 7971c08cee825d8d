"""Access-URL resolution, media-type classification, and format reports.

Each URL gets a lightweight header-only probe first, falling back to a
one-byte ranged GET when the server rejects header-only requests. Requests
to one host are serialized and spaced by the configured delay; the batch
never aborts because one URL misbehaves.
"""

from __future__ import annotations

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence
from urllib.parse import urlsplit

import requests


class EmptyInput(ValueError):
    pass


REASON_TIMEOUT = "Timeout"
REASON_DNS = "Dns"
REASON_TOO_MANY_REDIRECTS = "TooManyRedirects"
REASON_REFUSED = "Refused"


def reason_http_error(code: int) -> str:
    return f"HttpError({code})"


@dataclass(frozen=True, slots=True)
class FetchPolicy:
    max_redirects: int = 5
    timeout: float = 10.0
    per_host_delay: float = 0.0
    concurrency: int = 4


@dataclass(frozen=True, slots=True)
class LinkResult:
    url: str
    resolved: bool
    http_status: Optional[int] = None
    media_type: Optional[str] = None
    final_url: Optional[str] = None
    reason: Optional[str] = None
    fetched_at: float = 0.0
    redirect_hops: int = 0

    def to_json(self) -> dict:
        return {
            "url": self.url,
            "resolved": self.resolved,
            "http_status": self.http_status,
            "media_type": self.media_type,
            "final_url": self.final_url,
            "reason": self.reason,
            "fetched_at": self.fetched_at,
            "redirect_hops": self.redirect_hops,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinkResult":
        return cls(**data)


class _HostThrottle:
    """Serializes requests per host and enforces a minimum spacing."""

    def __init__(self, delay: float) -> None:
        self.delay = delay
        self._lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._last: dict[str, float] = {}

    def acquire(self, host: str) -> threading.Lock:
        with self._lock:
            lock = self._locks.setdefault(host, threading.Lock())
        return lock

    def wait_turn(self, host: str) -> None:
        if self.delay <= 0:
            return
        last = self._last.get(host)
        if last is not None:
            remaining = last + self.delay - time.monotonic()
            if remaining > 0:
                time.sleep(remaining)

    def mark(self, host: str) -> None:
        self._last[host] = time.monotonic()


def _strip_media_type(content_type: str) -> str:
    return content_type.split(";", 1)[0].strip().lower()


def _classify_exception(exc: Exception) -> str:
    if isinstance(exc, requests.exceptions.Timeout):
        return REASON_TIMEOUT
    if isinstance(exc, requests.exceptions.TooManyRedirects):
        return REASON_TOO_MANY_REDIRECTS
    message = str(exc).lower()
    if "name or service not known" in message or "getaddrinfo" in message or "name resolution" in message:
        return REASON_DNS
    return REASON_REFUSED


def _probe(session: requests.Session, url: str, policy: FetchPolicy) -> LinkResult:
    now = time.time()
    try:
        response = session.head(url, timeout=policy.timeout, allow_redirects=True)
        if response.status_code in (405, 501) or response.status_code >= 400:
            response = session.get(
                url,
                timeout=policy.timeout,
                allow_redirects=True,
                headers={"Range": "bytes=0-0"},
                stream=True,
            )
            response.close()
    except requests.RequestException as exc:
        return LinkResult(url=url, resolved=False, reason=_classify_exception(exc), fetched_at=now)

    hops = len(response.history)
    if 200 <= response.status_code < 300:
        return LinkResult(
            url=url,
            resolved=True,
            http_status=response.status_code,
            media_type=_strip_media_type(response.headers.get("Content-Type", "")),
            final_url=response.url,
            fetched_at=now,
            redirect_hops=hops,
        )
    return LinkResult(
        url=url,
        resolved=False,
        http_status=response.status_code,
        reason=reason_http_error(response.status_code),
        fetched_at=now,
        redirect_hops=hops,
    )


def check_urls(
    urls: Sequence[str],
    policy: FetchPolicy = FetchPolicy(),
    cache_path: Optional[Path] = None,
) -> list[LinkResult]:
    """Probe every URL; results line up with the input order.

    With a cache path, URLs already in the cache are skipped and fresh
    results are appended, making re-runs incremental.
    """
    cache: dict[str, LinkResult] = {}
    if cache_path is not None and cache_path.exists():
        for entry in json.loads(cache_path.read_text("utf-8")):
            result = LinkResult.from_json(entry)
            cache[result.url] = result

    throttle = _HostThrottle(policy.per_host_delay)
    local = threading.local()

    def session() -> requests.Session:
        if not hasattr(local, "session"):
            s = requests.Session()
            s.max_redirects = policy.max_redirects
            local.session = s
        return local.session

    def work(url: str) -> LinkResult:
        if url in cache:
            return cache[url]
        host = urlsplit(url).hostname or ""
        lock = throttle.acquire(host)
        with lock:
            throttle.wait_turn(host)
            try:
                return _probe(session(), url, policy)
            finally:
                throttle.mark(host)

    if not urls:
        results: list[LinkResult] = []
    else:
        with ThreadPoolExecutor(max_workers=max(1, policy.concurrency)) as pool:
            results = list(pool.map(work, urls))

    if cache_path is not None:
        for result in results:
            cache[result.url] = result
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        cache_path.write_text(
            json.dumps([cache[key].to_json() for key in sorted(cache)], indent=1), "utf-8"
        )
    return results


# Media-type classification table: declared Content-Type only, parameters
# and casing ignored. Unlisted types become Other(<type>) and count as not
# machine-readable.
MEDIA_CLASSES: dict[str, tuple[str, bool]] = {
    "text/html": ("HTML", False),
    "application/rdf+xml": ("RDF/XML", True),
    "image/jpeg": ("JPEG Image", False),
    "application/xml": ("XML (application)", True),
    "text/plain": ("Plain Text", True),
    "application/pdf": ("PDF", False),
    "text/xml": ("XML (text)", True),
    "application/zip": ("Zip Archive", True),
    "image/png": ("PNG Image", False),
    "application/gzip": ("gzip Archive", True),
}

_LABEL_MACHINE_READABLE = {label: mr for label, mr in MEDIA_CLASSES.values()}


def classify_media(media_type: str) -> tuple[str, bool]:
    stripped = _strip_media_type(media_type)
    if stripped in MEDIA_CLASSES:
        return MEDIA_CLASSES[stripped]
    return f"Other({stripped})", False


@dataclass(slots=True)
class FormatReport:
    rows: list[tuple[str, int, float]]  # (label, count, percentage)
    total: int
    machine_readable_fraction: float

    def to_tsv(self) -> str:
        lines = [f"# sample size\t{self.total}"]
        lines.append("Format\tResources\tPercentage")
        for label, count, pct in self.rows:
            lines.append(f"{label}\t{count}\t{pct:.1f}%")
        lines.append(f"# machine-readable fraction\t{self.machine_readable_fraction:.4f}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_counts(cls, counts: dict[str, int]) -> "FormatReport":
        total = sum(counts.values())
        if total == 0:
            raise EmptyInput("no resolved results to report on")
        rows = [
            (label, count, 100.0 * count / total)
            for label, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        ]
        machine_readable = sum(
            count for label, count in counts.items() if _LABEL_MACHINE_READABLE.get(label, False)
        )
        return cls(rows=rows, total=total, machine_readable_fraction=machine_readable / total)


def format_report(results: Sequence[LinkResult]) -> FormatReport:
    """Format distribution over the resolved results."""
    counts: dict[str, int] = {}
    for result in results:
        if result.resolved:
            label, _ = classify_media(result.media_type or "")
            counts[label] = counts.get(label, 0) + 1
    return FormatReport.from_counts(counts)


@dataclass(frozen=True, slots=True)
class Resolvability:
    resolved: int
    total: int

    @property
    def fraction(self) -> float:
        return self.resolved / self.total if self.total else 0.0


def resolvability(results: Sequence[LinkResult]) -> Resolvability:
    return Resolvability(sum(1 for r in results if r.resolved), len(results))
