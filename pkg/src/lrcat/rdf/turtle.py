"""Turtle reader and writer.

The reader covers the subset the portal needs: prefix declarations, the
``a`` keyword, predicate-object lists with ``;``, object lists with ``,``,
blank node property lists, labeled and anonymous blank nodes, and string,
numeric, and boolean literals. Collections ``( ... )`` are out of scope and
rejected with a located error. The result is defined by the equivalent
N-Triples expansion.

The writer groups triples by subject and emits prefixed names for the
namespaces the portal uses; output is deterministic (sorted subjects,
predicates, and objects) and re-parses to an isomorphic graph.
"""

from __future__ import annotations

import re
from typing import Optional

from .ntriples import RdfSyntaxError, _ECHAR_DECODE, _decode_input, _escape_literal
from .terms import BlankNode, Graph, Iri, Literal, RDF_TYPE, Term, TermError, Triple, RDF_NS, RDFS_NS, XSD_NS

_XSD_INTEGER = XSD_NS + "integer"
_XSD_DECIMAL = XSD_NS + "decimal"
_XSD_DOUBLE = XSD_NS + "double"
_XSD_BOOLEAN = XSD_NS + "boolean"

_PNAME_RE = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:([A-Za-z0-9_][A-Za-z0-9_\-.]*)?")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d*(?:[eE][+-]?\d+)?|\.?\d+(?:[eE][+-]?\d+)?)")
_LANG_RE = re.compile(r"@([A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*)")


class _Scanner:
    """Character cursor over the whole Turtle document."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def location(self, pos: Optional[int] = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        prefix = self.text[:pos]
        line = prefix.count("\n") + 1
        column = pos - (prefix.rfind("\n") + 1) + 1
        return line, column

    def error(self, reason: str, pos: Optional[int] = None) -> RdfSyntaxError:
        line, column = self.location(pos)
        return RdfSyntaxError(line, column, reason)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, n: int = 1) -> str:
        return self.text[self.pos : self.pos + n]

    def skip_ws(self) -> None:
        while not self.eof():
            c = self.text[self.pos]
            if c in " \t\r\n":
                self.pos += 1
            elif c == "#":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl + 1
            else:
                return

    def expect(self, token: str) -> None:
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return
        raise self.error(f"expected {token!r}")

    def read_uchar(self) -> str:
        kind = self.text[self.pos]
        self.pos += 1
        width = 4 if kind == "u" else 8
        hexdigits = self.text[self.pos : self.pos + width]
        if len(hexdigits) != width or any(c not in "0123456789abcdefABCDEF" for c in hexdigits):
            raise self.error(f"malformed \\{kind} escape")
        self.pos += width
        code = int(hexdigits, 16)
        if code > 0x10FFFF:
            raise self.error("escape beyond Unicode range")
        return chr(code)

    def read_iriref(self) -> str:
        start = self.pos
        self.expect("<")
        out = []
        while True:
            if self.eof():
                raise self.error("unterminated IRI", start)
            c = self.text[self.pos]
            if c == ">":
                self.pos += 1
                return "".join(out)
            if c == "\\":
                self.pos += 1
                if self.peek() in ("u", "U"):
                    out.append(self.read_uchar())
                    continue
                raise self.error("only \\u and \\U escapes are allowed in IRIs")
            if c in ' "<{}|^`\\' or ord(c) <= 0x20:
                raise self.error(f"character {c!r} not allowed in IRI")
            out.append(c)
            self.pos += 1

    def read_string(self) -> str:
        if self.peek(3) in ('"""', "'''"):
            quote = self.peek(3)
            self.pos += 3
            out = []
            while True:
                if self.eof():
                    raise self.error("unterminated long string")
                if self.text.startswith(quote, self.pos):
                    self.pos += 3
                    return "".join(out)
                c = self.text[self.pos]
                if c == "\\":
                    self.pos += 1
                    out.append(self._string_escape())
                    continue
                out.append(c)
                self.pos += 1
        quote = self.peek()
        self.pos += 1
        out = []
        while True:
            if self.eof():
                raise self.error("unterminated string")
            c = self.text[self.pos]
            if c == quote:
                self.pos += 1
                return "".join(out)
            if c in "\n\r":
                raise self.error("newline inside short string")
            if c == "\\":
                self.pos += 1
                out.append(self._string_escape())
                continue
            out.append(c)
            self.pos += 1

    def _string_escape(self) -> str:
        e = self.peek()
        if e in ("u", "U"):
            return self.read_uchar()
        if e in _ECHAR_DECODE:
            self.pos += 1
            return _ECHAR_DECODE[e]
        raise self.error(f"unknown escape \\{e}")


class TurtleParser:
    def __init__(self, text: str) -> None:
        self.sc = _Scanner(text)
        self.prefixes: dict[str, str] = {}
        self.graph = Graph()
        self._anon_counter = 0
        self._used_labels: set[str] = set()

    def parse(self) -> Graph:
        sc = self.sc
        sc.skip_ws()
        while not sc.eof():
            if sc.peek(7).lower() == "@prefix" or sc.peek(6).upper() == "PREFIX":
                self._parse_prefix()
            elif sc.peek(5).lower() == "@base" or sc.peek(4).upper() == "BASE":
                raise sc.error("base declarations are not supported")
            else:
                self._parse_triples()
            sc.skip_ws()
        return self.graph

    def _fresh_blank(self) -> BlankNode:
        while True:
            label = f"b{self._anon_counter}"
            self._anon_counter += 1
            if label not in self._used_labels:
                self._used_labels.add(label)
                return BlankNode(label)

    def _parse_prefix(self) -> None:
        sc = self.sc
        sparql_style = sc.peek(6).upper() == "PREFIX"
        sc.pos += 6 if sparql_style else 7
        sc.skip_ws()
        m = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:").match(sc.text, sc.pos)
        if not m:
            raise sc.error("expected prefix name")
        name = m.group(1) or ""
        sc.pos = m.end()
        sc.skip_ws()
        iri = sc.read_iriref()
        self.prefixes[name] = iri
        sc.skip_ws()
        if not sparql_style:
            sc.expect(".")

    def _expand_pname(self) -> Iri:
        sc = self.sc
        m = _PNAME_RE.match(sc.text, sc.pos)
        if not m:
            raise sc.error("expected prefixed name")
        prefix, local = m.group(1) or "", m.group(2) or ""
        end = m.end()
        # a trailing '.' belongs to the statement, not the local name
        while local.endswith("."):
            local = local[:-1]
            end -= 1
        if prefix not in self.prefixes:
            raise sc.error(f"undefined prefix {prefix!r}:")
        sc.pos = end
        try:
            return Iri(self.prefixes[prefix] + local)
        except TermError as exc:
            raise sc.error(str(exc)) from None

    def _parse_triples(self) -> None:
        sc = self.sc
        subject = self._parse_subject()
        sc.skip_ws()
        # a bare blank node property list may omit the predicate-object list
        if isinstance(subject, BlankNode) and sc.peek() == ".":
            sc.expect(".")
            return
        self._parse_predicate_object_list(subject)
        sc.skip_ws()
        sc.expect(".")

    def _parse_subject(self) -> Term:
        sc = self.sc
        sc.skip_ws()
        c = sc.peek()
        if c == "<":
            return self._read_full_iri()
        if c == "_":
            return self._read_blank_label()
        if c == "[":
            return self._parse_blank_property_list()
        if c == "(":
            raise sc.error("collections are not supported")
        return self._expand_pname()

    def _read_full_iri(self) -> Iri:
        sc = self.sc
        start = sc.pos
        value = sc.read_iriref()
        try:
            return Iri(value)
        except TermError as exc:
            raise sc.error(str(exc), start) from None

    def _read_blank_label(self) -> BlankNode:
        sc = self.sc
        sc.expect("_")
        sc.expect(":")
        start = sc.pos
        while not sc.eof() and (sc.text[sc.pos].isalnum() or sc.text[sc.pos] in "_-."):
            sc.pos += 1
        label = sc.text[start : sc.pos]
        while label.endswith("."):
            label = label[:-1]
            sc.pos -= 1
        if not label:
            raise sc.error("empty blank node label")
        self._used_labels.add(label)
        return BlankNode(label)

    def _parse_blank_property_list(self) -> BlankNode:
        sc = self.sc
        sc.expect("[")
        node = self._fresh_blank()
        sc.skip_ws()
        if sc.peek() == "]":
            sc.expect("]")
            return node
        self._parse_predicate_object_list(node)
        sc.skip_ws()
        sc.expect("]")
        return node

    def _parse_predicate_object_list(self, subject: Term) -> None:
        sc = self.sc
        while True:
            sc.skip_ws()
            predicate = self._parse_verb()
            while True:
                sc.skip_ws()
                obj = self._parse_object()
                self.graph.add(Triple(subject, predicate, obj))
                sc.skip_ws()
                if sc.peek() == ",":
                    sc.expect(",")
                    continue
                break
            if sc.peek() != ";":
                return
            while sc.peek() == ";":
                sc.expect(";")
                sc.skip_ws()
            # dangling ';' before '.' or ']' is legal Turtle
            if sc.peek() in (".", "]") or sc.eof():
                return

    def _parse_verb(self) -> Iri:
        sc = self.sc
        if sc.peek() == "a" and (sc.pos + 1 >= len(sc.text) or not (sc.text[sc.pos + 1].isalnum() or sc.text[sc.pos + 1] in "_:-")):
            sc.pos += 1
            return Iri(RDF_TYPE)
        if sc.peek() == "<":
            return self._read_full_iri()
        return self._expand_pname()

    def _parse_object(self) -> Term:
        sc = self.sc
        c = sc.peek()
        if c == "<":
            return self._read_full_iri()
        if c == "_":
            return self._read_blank_label()
        if c == "[":
            return self._parse_blank_property_list()
        if c == "(":
            raise sc.error("collections are not supported")
        if c in ('"', "'"):
            return self._parse_literal()
        if sc.text.startswith("true", sc.pos) and not self._word_continues(4):
            sc.pos += 4
            return Literal("true", datatype=_XSD_BOOLEAN)
        if sc.text.startswith("false", sc.pos) and not self._word_continues(5):
            sc.pos += 5
            return Literal("false", datatype=_XSD_BOOLEAN)
        m = _NUMBER_RE.match(sc.text, sc.pos)
        if m and (c.isdigit() or c in "+-." ):
            lexical = m.group(0)
            sc.pos = m.end()
            if "e" in lexical.lower():
                return Literal(lexical, datatype=_XSD_DOUBLE)
            if "." in lexical:
                return Literal(lexical, datatype=_XSD_DECIMAL)
            return Literal(lexical, datatype=_XSD_INTEGER)
        return self._expand_pname()

    def _word_continues(self, offset: int) -> bool:
        sc = self.sc
        idx = sc.pos + offset
        return idx < len(sc.text) and (sc.text[idx].isalnum() or sc.text[idx] in "_-:")

    def _parse_literal(self) -> Literal:
        sc = self.sc
        lexical = sc.read_string()
        if sc.peek() == "@":
            m = _LANG_RE.match(sc.text, sc.pos)
            if not m:
                raise sc.error("malformed language tag")
            sc.pos = m.end()
            return Literal(lexical, lang=m.group(1))
        if sc.peek(2) == "^^":
            sc.pos += 2
            sc.skip_ws()
            if sc.peek() == "<":
                dt = sc.read_iriref()
            else:
                dt = self._expand_pname().value
            try:
                return Literal(lexical, datatype=dt)
            except TermError as exc:
                raise sc.error(str(exc)) from None
        return Literal(lexical)


def parse_turtle(data: bytes | str) -> Graph:
    """Parse Turtle text into a Graph; errors carry line and column."""
    return TurtleParser(_decode_input(data)).parse()


# Prefixes the writer is allowed to abbreviate with. Kept small and fixed so
# output stays predictable.
WRITER_PREFIXES: tuple[tuple[str, str], ...] = (
    ("rdf", RDF_NS),
    ("rdfs", RDFS_NS),
    ("xsd", XSD_NS),
    ("dct", "http://purl.org/dc/terms/"),
    ("dcat", "http://www.w3.org/ns/dcat#"),
    ("ms", "http://lrcat.example.org/ns/metashare#"),
)

_LOCAL_OK_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_\-]*$")


def _abbreviate(iri: str, used: set[str]) -> str:
    for prefix, ns in WRITER_PREFIXES:
        if iri.startswith(ns):
            local = iri[len(ns) :]
            if _LOCAL_OK_RE.match(local):
                used.add(prefix)
                return f"{prefix}:{local}"
    return f"<{iri}>"


def _turtle_term(term: Term, used: set[str]) -> str:
    if isinstance(term, Iri):
        if term.value == RDF_TYPE:
            return "a"
        return _abbreviate(term.value, used)
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    base = f'"{_escape_literal(term.lexical)}"'
    if term.lang is not None:
        return f"{base}@{term.lang}"
    if term.datatype is not None:
        return f"{base}^^{_abbreviate(term.datatype, used)}"
    return base


def serialize_turtle(graph: Graph) -> bytes:
    """Deterministic Turtle grouped by subject."""
    used: set[str] = set()
    by_subject: dict[str, tuple[Term, dict[str, list[str]]]] = {}
    for t in graph:
        skey = _turtle_term(t.subject, used)
        _, preds = by_subject.setdefault(skey, (t.subject, {}))
        pkey = _turtle_term(t.predicate, used)
        preds.setdefault(pkey, []).append(_turtle_term(t.object, used))

    blocks = []
    for skey in sorted(by_subject):
        _, preds = by_subject[skey]
        pred_parts = []
        for pkey in sorted(preds, key=lambda p: ("" if p == "a" else p)):
            objs = ", ".join(sorted(preds[pkey]))
            pred_parts.append(f"{pkey} {objs}")
        joined = " ;\n    ".join(pred_parts)
        blocks.append(f"{skey} {joined} .\n")

    header = "".join(
        f"@prefix {prefix}: <{ns}> .\n" for prefix, ns in WRITER_PREFIXES if prefix in used
    )
    if header and blocks:
        header += "\n"
    return (header + "\n".join(blocks)).encode("utf-8")
