"""The portal's HTTP face.

Routes:
    GET  /                         minimal server-rendered search page
    GET  /resource/{repo}/{key}[.ext]   content-negotiated record pages
    GET  /api/search               faceted + free-text search JSON
    GET  /api/facets               facet value counts over the whole corpus
    GET|POST /sparql               query endpoint, JSON results
    GET  /dump.nt                  canonical N-Triples dump
    GET  /health                   liveness and corpus size
    GET  /ui/...                   optional static bundle (the frontend)

Every record IRI resolves: the HTML view is for people, and the same URI
serves Turtle, N-Triples, RDF/XML, and JSON-LD to software agents through
the Accept header or a file-extension override. Resources answer 200
directly at the resource URI.
"""

from __future__ import annotations

import html
import json
import re
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, quote, urlsplit

from . import rdf
from .rdf import serialize
from .records import facet_values
from .sparql import (
    EvalTimeout,
    EvaluationError,
    SparqlSyntaxError,
    UnsupportedFeature,
    evaluate,
    parse_query,
    to_json_results,
)
from .store import TripleStore, facet_search
from .vocab import FACET_ORDER, FacetKind

FORMAT_HTML = "html"

# negotiated format -> (media type, extension); preference order matters for
# q-value ties: Html > Turtle > NTriples > JsonLd > RdfXml
NEGOTIABLE: tuple[tuple[str, str, str], ...] = (
    (FORMAT_HTML, "text/html", ".html"),
    (rdf.FORMAT_TURTLE, "text/turtle", ".ttl"),
    (rdf.FORMAT_NTRIPLES, "application/n-triples", ".nt"),
    (rdf.FORMAT_JSONLD, "application/ld+json", ".jsonld"),
    (rdf.FORMAT_RDFXML, "application/rdf+xml", ".rdf"),
)

_EXTENSION_TO_FORMAT = {ext: fmt for fmt, _, ext in NEGOTIABLE}
_FORMAT_TO_MEDIA = {fmt: media for fmt, media, _ in NEGOTIABLE}

FORMAT_LABELS = {
    rdf.FORMAT_RDFXML: "RDF/XML",
    rdf.FORMAT_NTRIPLES: "N-Triples",
    rdf.FORMAT_TURTLE: "Turtle",
    rdf.FORMAT_JSONLD: "JSON-LD",
}


class NotAcceptable(ValueError):
    pass


def _parse_accept(header: str) -> list[tuple[str, float]]:
    entries = []
    for part in header.split(","):
        part = part.strip()
        if not part:
            continue
        media, *params = part.split(";")
        media = media.strip().lower()
        if not media or "/" not in media:
            continue
        q = 1.0
        for param in params:
            name, _, value = param.partition("=")
            if name.strip().lower() == "q":
                try:
                    q = float(value.strip())
                except ValueError:
                    q = 0.0
        entries.append((media, max(0.0, min(q, 1.0))))
    return entries


def negotiate(accept_header: Optional[str], extension_override: Optional[str] = None) -> str:
    """Pick a response format. Extension wins; otherwise the highest-q
    supported media type; ties break by server preference order; an absent
    or */* header means HTML."""
    if extension_override:
        fmt = _EXTENSION_TO_FORMAT.get(extension_override.lower())
        if fmt is None:
            raise NotAcceptable(f"unknown extension {extension_override!r}")
        return fmt

    if accept_header is None or not accept_header.strip():
        return FORMAT_HTML
    entries = _parse_accept(accept_header)
    if not entries:
        return FORMAT_HTML

    best_fmt = None
    best_q = 0.0
    for fmt, media, _ in NEGOTIABLE:
        major = media.split("/", 1)[0]
        q = None
        for pattern, pattern_q in entries:
            if pattern == media:
                q = pattern_q if q is None else max(q, pattern_q)
        if q is None:
            for pattern, pattern_q in entries:
                if pattern == major + "/*":
                    q = pattern_q if q is None else max(q, pattern_q)
        if q is None:
            for pattern, pattern_q in entries:
                if pattern == "*/*":
                    q = pattern_q if q is None else max(q, pattern_q)
        if q is not None and q > best_q:
            best_q = q
            best_fmt = fmt
    if best_fmt is None or best_q <= 0.0:
        raise NotAcceptable(accept_header)
    return best_fmt


@dataclass(slots=True)
class Portal:
    """Immutable snapshot served by the HTTP layer; swap to refresh."""

    store: TripleStore
    query_time_budget: float = 5.0
    ui_dir: Optional[Path] = None


_FACET_PARAMS = {facet.value.lower(): facet for facet in FacetKind}
_RESERVED_PARAMS = {"q", "page", "pagesize"}


class PortalHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    portal: Portal  # assigned by make_server

    def log_message(self, format, *args):  # noqa: A002 - quiet by default
        pass

    # -- plumbing ---------------------------------------------------------

    def _send(self, status: int, content_type: str, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(body)

    def _json(self, status: int, payload: dict) -> None:
        self._send(status, "application/json; charset=utf-8", json.dumps(payload, ensure_ascii=False).encode("utf-8"))

    def _html(self, status: int, body: str) -> None:
        self._send(status, "text/html; charset=utf-8", body.encode("utf-8"))

    # -- routing ------------------------------------------------------------

    def do_GET(self) -> None:
        try:
            self._route()
        except BrokenPipeError:
            pass
        except Exception as exc:  # last-resort guard: the server must stay up
            try:
                self._json(500, {"error": f"internal error: {exc}"})
            except Exception:
                pass

    do_HEAD = do_GET

    def do_POST(self) -> None:
        parts = urlsplit(self.path)
        if parts.path == "/sparql":
            length = int(self.headers.get("Content-Length") or 0)
            body = self.rfile.read(length).decode("utf-8", "replace")
            content_type = (self.headers.get("Content-Type") or "").split(";")[0].strip().lower()
            if content_type == "application/x-www-form-urlencoded":
                params = parse_qs(body)
                query_text = (params.get("query") or [""])[0]
            else:
                query_text = body
            self._sparql(query_text)
            return
        self._json(404, {"error": "not found"})

    def _route(self) -> None:
        parts = urlsplit(self.path)
        path = parts.path
        params = parse_qs(parts.query)

        if path == "/health":
            store = self.portal.store
            self._json(200, {"status": "ok", "records": len(store.records), "triples": len(store)})
            return
        if path == "/dump.nt":
            self._send(200, "application/n-triples; charset=utf-8", self.portal.store.dump())
            return
        if path == "/api/search":
            self._search_api(params)
            return
        if path == "/api/facets":
            self._facets_api()
            return
        if path == "/sparql":
            query_text = (params.get("query") or [""])[0]
            self._sparql(query_text)
            return
        if path.startswith("/resource/"):
            self._resource(path)
            return
        if path == "/" or path == "/search":
            self._search_page(params)
            return
        if path.startswith("/ui/") and self.portal.ui_dir is not None:
            self._static(path[len("/ui/") :])
            return
        self._json(404, {"error": "not found", "path": path})

    # -- resource pages -------------------------------------------------------

    def _resource(self, path: str) -> None:
        match = re.match(r"^/resource/([^/]+)/([^/]+?)(\.[A-Za-z]+)?$", path)
        if not match:
            self._json(404, {"error": "not found", "path": path})
            return
        repo, key, extension = match.group(1), match.group(2), match.group(3)
        record_id = f"{_base_of(self.portal.store)}/resource/{repo}/{key}"
        record = self.portal.store.records.get(record_id)
        if record is None:
            self._json(404, {"error": "unknown resource", "id": record_id})
            return
        try:
            fmt = negotiate(self.headers.get("Accept"), extension)
        except NotAcceptable as exc:
            self._json(406, {"error": "not acceptable", "detail": str(exc)})
            return
        graph = self.portal.store.record_graph(record_id)
        if fmt == FORMAT_HTML:
            self._html(200, _record_page(record, record_id, path))
            return
        body = serialize(graph, fmt)
        self._send(200, _FORMAT_TO_MEDIA[fmt] + "; charset=utf-8", body)

    # -- search ---------------------------------------------------------------

    def _parse_search_params(self, params: dict[str, list[str]]):
        filters: dict[FacetKind, str] = {}
        for name, values in params.items():
            lowered = name.lower()
            if lowered in _RESERVED_PARAMS:
                continue
            facet = _FACET_PARAMS.get(lowered)
            if facet is None:
                raise ValueError(f"unknown facet {name!r}")
            filters[facet] = values[0]
        try:
            page = int((params.get("page") or ["1"])[0])
            page_size = int((params.get("pageSize") or params.get("pagesize") or ["10"])[0])
        except ValueError:
            raise ValueError("page and pageSize must be integers") from None
        text = (params.get("q") or [None])[0]
        return filters, text, page, page_size

    def _search_api(self, params: dict[str, list[str]]) -> None:
        try:
            filters, text, page, page_size = self._parse_search_params(params)
            result = facet_search(self.portal.store, filters, text, page, page_size)
        except ValueError as exc:
            self._json(400, {"error": str(exc)})
            return
        self._json(
            200,
            {
                "total": result.total,
                "page": result.page,
                "pageSize": result.page_size,
                "results": [
                    {
                        "id": summary.id,
                        "title": summary.title,
                        "languages": list(summary.languages),
                        "type": summary.resource_type,
                    }
                    for summary in result.results
                ],
                "facets": {
                    facet.value: [{"value": value, "count": count} for value, count in counts]
                    for facet, counts in result.facet_counts.items()
                },
            },
        )

    def _facets_api(self) -> None:
        result = facet_search(self.portal.store, page_size=1)
        self._json(
            200,
            {
                "total": result.total,
                "facets": {
                    facet.value: [{"value": value, "count": count} for value, count in counts]
                    for facet, counts in result.facet_counts.items()
                },
            },
        )

    def _search_page(self, params: dict[str, list[str]]) -> None:
        try:
            filters, text, page, page_size = self._parse_search_params(params)
            result = facet_search(self.portal.store, filters, text, page, page_size)
        except ValueError as exc:
            self._html(400, f"<html><body><p>{html.escape(str(exc))}</p></body></html>")
            return
        rows = []
        for summary in result.results:
            local = summary.id.split("/resource/", 1)[-1]
            rows.append(
                f'<li><a href="/resource/{html.escape(local)}">{html.escape(summary.title or summary.id)}</a>'
                f" <small>{html.escape(', '.join(summary.languages))}</small></li>"
            )
        body = f"""<!DOCTYPE html>
<html><head><title>Language resource catalog</title></head>
<body>
<h1>Language resource catalog</h1>
<form method="get" action="/search">
  <input type="text" name="q" value="{html.escape(text or '')}" placeholder="free text">
  <button type="submit">Search</button>
</form>
<p>{result.total} result(s)</p>
<ul>
{chr(10).join(rows)}
</ul>
</body></html>"""
        self._html(200, body)

    def _static(self, relative: str) -> None:
        root = self.portal.ui_dir
        target = (root / relative).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            self._json(404, {"error": "not found"})
            return
        content_types = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".map": "application/json",
        }
        ctype = content_types.get(target.suffix, "application/octet-stream")
        self._send(200, ctype, target.read_bytes())

    # -- sparql -----------------------------------------------------------------

    def _sparql(self, query_text: str) -> None:
        if not query_text.strip():
            self._json(400, {"error": "missing query"})
            return
        try:
            query = parse_query(query_text)
        except SparqlSyntaxError as exc:
            self._json(400, {"error": "syntax error", "line": exc.line, "column": exc.column, "detail": exc.reason})
            return
        except UnsupportedFeature as exc:
            self._json(400, {"error": "unsupported feature", "token": exc.token})
            return
        try:
            solutions = evaluate(query, self.portal.store, time_budget=self.portal.query_time_budget)
        except EvaluationError as exc:
            self._json(400, {"error": "evaluation error", "detail": str(exc)})
            return
        except EvalTimeout as exc:
            self._json(408, {"error": "timeout", "reason": str(exc), "partial": False})
            return
        self._send(200, "application/sparql-results+json; charset=utf-8", to_json_results(solutions))


def _base_of(store: TripleStore) -> str:
    # records are minted under one base; recover it from any record id
    for record_id in store.records:
        cut = record_id.find("/resource/")
        if cut > 0:
            return record_id[:cut]
    return "http://lrcat.example.org"


def _record_page(record, record_id: str, request_path: str) -> str:
    plain_path = re.sub(r"\.[A-Za-z]+$", "", request_path)
    format_links = " ".join(
        f'<a href="{html.escape(plain_path + ext)}">{html.escape(FORMAT_LABELS[fmt])}</a>'
        for fmt, _, ext in NEGOTIABLE
        if fmt != FORMAT_HTML
    )
    title = record.titles[0][0] if record.titles else record_id
    rows = []
    display_order = [
        (FacetKind.DESCRIPTION, "Description"),
        (FacetKind.LANGUAGE, "Language"),
        (FacetKind.TYPE, "Type"),
        (FacetKind.RIGHTS, "Rights"),
        (FacetKind.CREATOR, "Creator"),
        (FacetKind.SUBJECT, "Subject"),
        (FacetKind.CONTACT_POINT, "Contact Point"),
        (FacetKind.ACCESS_URL, "Access URL"),
    ]
    for facet, label in display_order:
        for value in facet_values(record, facet):
            param = facet.value
            search_link = f"/search?{quote(param)}={quote(value)}"
            if facet is FacetKind.ACCESS_URL:
                cell = f'<a href="{html.escape(value)}">{html.escape(value)}</a>'
            else:
                cell = html.escape(value)
            rows.append(
                f'<tr><td>{label}</td><td>{cell}</td>'
                f'<td><a href="{html.escape(search_link)}" title="search this value">&#128269;</a></td></tr>'
            )
    for url in record.see_also:
        rows.append(
            f'<tr><td>See Also</td><td><a href="{html.escape(url)}">{html.escape(url)}</a></td><td></td></tr>'
        )
    return f"""<!DOCTYPE html>
<html><head><title>{html.escape(title)}</title></head>
<body>
<h1>{html.escape(title)}</h1>
<p>{format_links}</p>
<p>Instance of: Resource Info</p>
<table border="1">
{chr(10).join(rows)}
</table>
</body></html>"""


def make_server(portal: Portal, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundPortalHandler", (PortalHandler,), {"portal": portal})
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    return server


def start_background(portal: Portal, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    server = make_server(portal, host, port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def serve_forever(portal: Portal, host: str, port: int) -> None:
    server = make_server(portal, host, port)
    print(f"serving on http://{host}:{server.server_address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
