"""N-Triples reader and canonical writer.

The writer emits one triple per line, pure ASCII, with the escape set
limited to \\" \\\\ \\n \\r \\t plus \\uXXXX / \\UXXXXXXXX for everything
else outside printable ASCII, and lines sorted lexicographically by the
serialized subject, predicate, and object. Serializing the same graph twice
yields byte-identical output, which golden-file tests rely on.
"""

from __future__ import annotations

from .terms import BlankNode, Graph, Iri, Literal, Term, TermError, Triple


class RdfSyntaxError(ValueError):
    """Parse failure with the 1-based line and column of the first error."""

    def __init__(self, line: int, column: int, reason: str) -> None:
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


_ECHAR_DECODE = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _decode_input(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[: exc.start]
        line = prefix.count(b"\n") + 1
        column = exc.start - (prefix.rfind(b"\n") + 1) + 1
        raise RdfSyntaxError(line, column, "input is not valid UTF-8") from None


class _LineScanner:
    """Cursor over one line of N-Triples text."""

    def __init__(self, text: str, line_no: int) -> None:
        self.text = text
        self.pos = 0
        self.line_no = line_no

    def error(self, reason: str) -> RdfSyntaxError:
        return RdfSyntaxError(self.line_no, self.pos + 1, reason)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self) -> None:
        while not self.eof() and self.text[self.pos] in " \t":
            self.pos += 1

    def expect(self, char: str) -> None:
        if self.peek() != char:
            raise self.error(f"expected {char!r}")
        self.pos += 1

    def read_uchar(self) -> str:
        # positioned just after the backslash
        kind = self.peek()
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

    def read_iri(self) -> Iri:
        start = self.pos
        self.expect("<")
        out = []
        while True:
            if self.eof():
                raise self.error("unterminated IRI")
            c = self.text[self.pos]
            if c == ">":
                self.pos += 1
                break
            if c == "\\":
                self.pos += 1
                if self.peek() in "uU":
                    out.append(self.read_uchar())
                else:
                    raise self.error("only \\u and \\U escapes are allowed in IRIs")
                continue
            if c in ' "<{}|^`' or ord(c) <= 0x20:
                raise self.error(f"character {c!r} not allowed in IRI")
            out.append(c)
            self.pos += 1
        try:
            return Iri("".join(out))
        except TermError as exc:
            self.pos = start
            raise self.error(str(exc)) from None

    def read_blank(self) -> BlankNode:
        self.expect("_")
        self.expect(":")
        start = self.pos
        while not self.eof() and (self.text[self.pos].isalnum() or self.text[self.pos] in "_-."):
            self.pos += 1
        label = self.text[start : self.pos]
        while label.endswith("."):
            self.pos -= 1
            label = label[:-1]
        if not label:
            raise self.error("empty blank node label")
        return BlankNode(label)

    def read_literal(self) -> Literal:
        self.expect('"')
        out = []
        while True:
            if self.eof():
                raise self.error("unterminated string literal")
            c = self.text[self.pos]
            if c == '"':
                self.pos += 1
                break
            if c == "\\":
                self.pos += 1
                e = self.peek()
                if e in "uU":
                    out.append(self.read_uchar())
                elif e in _ECHAR_DECODE:
                    out.append(_ECHAR_DECODE[e])
                    self.pos += 1
                else:
                    raise self.error(f"unknown escape \\{e}")
                continue
            out.append(c)
            self.pos += 1
        lexical = "".join(out)
        if self.peek() == "@":
            self.pos += 1
            start = self.pos
            while not self.eof() and (self.text[self.pos].isalnum() or self.text[self.pos] == "-"):
                self.pos += 1
            tag = self.text[start : self.pos]
            try:
                return Literal(lexical, lang=tag)
            except TermError as exc:
                self.pos = start
                raise self.error(str(exc)) from None
        if self.text[self.pos : self.pos + 2] == "^^":
            self.pos += 2
            dt = self.read_iri()
            return Literal(lexical, datatype=dt.value)
        return Literal(lexical)

    def read_subject(self) -> Term:
        c = self.peek()
        if c == "<":
            return self.read_iri()
        if c == "_":
            return self.read_blank()
        raise self.error("expected IRI or blank node as subject")

    def read_object(self) -> Term:
        c = self.peek()
        if c == "<":
            return self.read_iri()
        if c == "_":
            return self.read_blank()
        if c == '"':
            return self.read_literal()
        raise self.error("expected IRI, blank node, or literal as object")


def parse_ntriples(data: bytes | str) -> Graph:
    """Parse N-Triples text into a Graph.

    Comments and blank lines are ignored. Raises RdfSyntaxError with the
    position of the first offending character; never crashes on odd input.
    """
    text = _decode_input(data)
    graph = Graph()
    for line_no, raw_line in enumerate(text.split("\n"), start=1):
        line = raw_line.rstrip("\r")
        sc = _LineScanner(line, line_no)
        sc.skip_ws()
        if sc.eof() or sc.peek() == "#":
            continue
        subject = sc.read_subject()
        sc.skip_ws()
        if sc.peek() != "<":
            raise sc.error("expected IRI as predicate")
        predicate = sc.read_iri()
        sc.skip_ws()
        obj = sc.read_object()
        sc.skip_ws()
        sc.expect(".")
        sc.skip_ws()
        if not sc.eof() and sc.peek() != "#":
            raise sc.error("unexpected trailing content")
        graph.add(Triple(subject, predicate, obj))
    return graph


def _escape_literal(value: str) -> str:
    out = []
    for c in value:
        if c == '"':
            out.append('\\"')
        elif c == "\\":
            out.append("\\\\")
        elif c == "\n":
            out.append("\\n")
        elif c == "\r":
            out.append("\\r")
        elif c == "\t":
            out.append("\\t")
        else:
            code = ord(c)
            if 0x20 <= code <= 0x7E:
                out.append(c)
            elif code <= 0xFFFF:
                out.append(f"\\u{code:04X}")
            else:
                out.append(f"\\U{code:08X}")
    return "".join(out)


def _escape_iri(value: str) -> str:
    out = []
    for c in value:
        code = ord(c)
        if 0x21 <= code <= 0x7E and c not in '<>"{}|^`\\':
            out.append(c)
        elif code <= 0xFFFF:
            out.append(f"\\u{code:04X}")
        else:
            out.append(f"\\U{code:08X}")
    return "".join(out)


def term_to_ntriples(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{_escape_iri(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        base = f'"{_escape_literal(term.lexical)}"'
        if term.lang is not None:
            return f"{base}@{term.lang}"
        if term.datatype is not None:
            return f"{base}^^<{_escape_iri(term.datatype)}>"
        return base
    raise TypeError(f"not an RDF term: {term!r}")


def serialize_ntriples(graph: Graph) -> bytes:
    """Canonical N-Triples: sorted lines, ASCII-only, deterministic bytes."""
    lines = sorted(
        (term_to_ntriples(t.subject), term_to_ntriples(t.predicate), term_to_ntriples(t.object))
        for t in graph
    )
    return "".join(f"{s} {p} {o} .\n" for s, p, o in lines).encode("ascii")
