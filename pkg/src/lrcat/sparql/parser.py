"""Recursive-descent parser for the SELECT subset.

Supported: PREFIX, SELECT [DISTINCT], WHERE with basic graph patterns,
FILTER with the documented builtins, OPTIONAL, UNION, ORDER BY, LIMIT,
OFFSET. Anything else raises UnsupportedFeature naming the offending
token rather than guessing.
"""

from __future__ import annotations

import re
from typing import Optional

from ..rdf import Iri, Literal, TermError
from ..rdf.terms import RDF_TYPE, XSD_NS
from .ast import (
    Comparison,
    Constant,
    Expression,
    FunctionCall,
    GroupPattern,
    LogicalAnd,
    LogicalNot,
    LogicalOr,
    PatternTerm,
    Query,
    TriplePattern,
    Var,
)


class SparqlSyntaxError(ValueError):
    def __init__(self, position: int, line: int, column: int, reason: str) -> None:
        super().__init__(f"line {line}, column {column}: {reason}")
        self.position = position
        self.line = line
        self.column = column
        self.reason = reason


class UnsupportedFeature(ValueError):
    def __init__(self, token: str) -> None:
        super().__init__(f"unsupported SPARQL feature: {token}")
        self.token = token


_UNSUPPORTED_KEYWORDS = {
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "INSERT",
    "DELETE",
    "LOAD",
    "CLEAR",
    "CREATE",
    "DROP",
    "WITH",
    "GRAPH",
    "SERVICE",
    "BIND",
    "VALUES",
    "MINUS",
    "EXISTS",
    "GROUP",
    "HAVING",
    "FROM",
    "REDUCED",
}

_BUILTINS = {"regex", "langmatches", "lang", "contains", "lcase"}

_VAR_RE = re.compile(r"[?$]([A-Za-z_][A-Za-z0-9_]*)")
_PNAME_RE = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:([A-Za-z0-9_][A-Za-z0-9_\-.]*)?")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_LANGTAG_RE = re.compile(r"@([A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*)")

_XSD_INTEGER = XSD_NS + "integer"
_XSD_DECIMAL = XSD_NS + "decimal"
_XSD_DOUBLE = XSD_NS + "double"
_XSD_BOOLEAN = XSD_NS + "boolean"


class _Cursor:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, reason: str, pos: Optional[int] = None) -> SparqlSyntaxError:
        pos = self.pos if pos is None else pos
        prefix = self.text[:pos]
        line = prefix.count("\n") + 1
        column = pos - (prefix.rfind("\n") + 1) + 1
        return SparqlSyntaxError(pos, line, column, reason)

    def skip_ws(self) -> None:
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in " \t\r\n":
                self.pos += 1
            elif c == "#":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl + 1
            else:
                return

    def eof(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, n: int = 1) -> str:
        self.skip_ws()
        return self.text[self.pos : self.pos + n]

    def peek_raw(self, n: int = 1) -> str:
        return self.text[self.pos : self.pos + n]

    def take(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.take(token):
            raise self.error(f"expected {token!r}")

    def keyword(self) -> Optional[str]:
        """Uppercased word at the cursor without consuming it."""
        self.skip_ws()
        m = _WORD_RE.match(self.text, self.pos)
        return m.group(0).upper() if m else None

    def take_keyword(self, word: str) -> bool:
        self.skip_ws()
        m = _WORD_RE.match(self.text, self.pos)
        if m and m.group(0).upper() == word:
            self.pos = m.end()
            return True
        return False


class SparqlParser:
    def __init__(self, text: str) -> None:
        self.cur = _Cursor(text)
        self.prefixes: dict[str, str] = {}

    # -- terms ----------------------------------------------------------

    def _iriref(self) -> Iri:
        cur = self.cur
        start = cur.pos
        cur.expect("<")
        end = cur.text.find(">", cur.pos)
        if end < 0:
            raise cur.error("unterminated IRI", start)
        value = cur.text[cur.pos : end]
        cur.pos = end + 1
        try:
            return Iri(value)
        except TermError as exc:
            raise cur.error(str(exc), start) from None

    def _pname(self) -> Iri:
        cur = self.cur
        cur.skip_ws()
        m = _PNAME_RE.match(cur.text, cur.pos)
        if not m:
            raise cur.error("expected prefixed name")
        prefix, local = m.group(1) or "", m.group(2) or ""
        end = m.end()
        while local.endswith("."):
            local = local[:-1]
            end -= 1
        if prefix not in self.prefixes:
            raise cur.error(f"undefined prefix {prefix!r}:")
        cur.pos = end
        return Iri(self.prefixes[prefix] + local)

    def _string(self) -> str:
        cur = self.cur
        cur.skip_ws()
        quote = cur.peek_raw()
        if quote not in ('"', "'"):
            raise cur.error("expected string literal")
        cur.pos += 1
        out = []
        while True:
            if cur.pos >= len(cur.text):
                raise cur.error("unterminated string")
            c = cur.text[cur.pos]
            if c == quote:
                cur.pos += 1
                return "".join(out)
            if c == "\\":
                cur.pos += 1
                e = cur.text[cur.pos : cur.pos + 1]
                mapping = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "'": "'", "\\": "\\"}
                if e not in mapping:
                    raise cur.error(f"unknown escape \\{e}")
                out.append(mapping[e])
                cur.pos += 1
                continue
            out.append(c)
            cur.pos += 1

    def _literal(self) -> Literal:
        cur = self.cur
        lexical = self._string()
        if cur.peek_raw() == "@":
            m = _LANGTAG_RE.match(cur.text, cur.pos)
            if not m:
                raise cur.error("malformed language tag")
            cur.pos = m.end()
            return Literal(lexical, lang=m.group(1))
        if cur.peek_raw(2) == "^^":
            cur.pos += 2
            dt = self._iriref() if cur.peek() == "<" else self._pname()
            return Literal(lexical, datatype=dt.value)
        return Literal(lexical)

    def _number(self) -> Literal:
        cur = self.cur
        cur.skip_ws()
        m = _NUMBER_RE.match(cur.text, cur.pos)
        if not m:
            raise cur.error("expected number")
        lexical = m.group(0)
        cur.pos = m.end()
        if "e" in lexical.lower():
            return Literal(lexical, datatype=_XSD_DOUBLE)
        if "." in lexical:
            return Literal(lexical, datatype=_XSD_DECIMAL)
        return Literal(lexical, datatype=_XSD_INTEGER)

    def _pattern_term(self, as_predicate: bool = False) -> PatternTerm:
        cur = self.cur
        c = cur.peek()
        if c in ("?", "$"):
            cur.skip_ws()
            m = _VAR_RE.match(cur.text, cur.pos)
            if not m:
                raise cur.error("malformed variable")
            cur.pos = m.end()
            return Var(m.group(1))
        if c == "<":
            return self._iriref()
        if c in ('"', "'"):
            if as_predicate:
                raise cur.error("literal cannot be a predicate")
            return self._literal()
        if c and (c.isdigit() or c in "+-"):
            if as_predicate:
                raise cur.error("number cannot be a predicate")
            return self._number()
        if c == "_":
            raise UnsupportedFeature("blank node in pattern")
        if c == "[":
            raise UnsupportedFeature("blank node property list in pattern")
        cur.skip_ws()
        word = cur.keyword()
        if word == "A" and not _PNAME_RE.match(cur.text, cur.pos):
            cur.pos += 1
            return Iri(RDF_TYPE)
        if word == "TRUE" and cur.take_keyword("TRUE"):
            return Literal("true", datatype=_XSD_BOOLEAN)
        if word == "FALSE" and cur.take_keyword("FALSE"):
            return Literal("false", datatype=_XSD_BOOLEAN)
        return self._pname()

    # -- filters ----------------------------------------------------------

    def _expression(self) -> Expression:
        return self._or_expression()

    def _or_expression(self) -> Expression:
        parts = [self._and_expression()]
        while self.cur.take("||"):
            parts.append(self._and_expression())
        return parts[0] if len(parts) == 1 else LogicalOr(tuple(parts))

    def _and_expression(self) -> Expression:
        parts = [self._unary_expression()]
        while self.cur.take("&&"):
            parts.append(self._unary_expression())
        return parts[0] if len(parts) == 1 else LogicalAnd(tuple(parts))

    def _unary_expression(self) -> Expression:
        cur = self.cur
        cur.skip_ws()
        if cur.peek_raw(2) != "!=" and cur.peek_raw() == "!":
            cur.pos += 1
            return LogicalNot(self._unary_expression())
        return self._relational_expression()

    def _relational_expression(self) -> Expression:
        lhs = self._primary_expression()
        cur = self.cur
        cur.skip_ws()
        for op in ("<=", ">=", "!=", "=", "<", ">"):
            if cur.text.startswith(op, cur.pos):
                cur.pos += len(op)
                rhs = self._primary_expression()
                return Comparison(op, lhs, rhs)
        return lhs

    def _primary_expression(self) -> Expression:
        cur = self.cur
        c = cur.peek()
        if c == "(":
            cur.expect("(")
            inner = self._expression()
            cur.expect(")")
            return inner
        if c in ("?", "$"):
            cur.skip_ws()
            m = _VAR_RE.match(cur.text, cur.pos)
            if not m:
                raise cur.error("malformed variable")
            cur.pos = m.end()
            return Var(m.group(1))
        if c in ('"', "'"):
            return Constant(self._literal())
        if c and (c.isdigit() or c in "+-"):
            return Constant(self._number())
        if c == "<":
            return Constant(self._iriref())
        cur.skip_ws()
        word = cur.keyword()
        if word is not None and word.lower() in _BUILTINS:
            name = word.lower()
            cur.take_keyword(word)
            cur.expect("(")
            args = [self._expression()]
            while cur.take(","):
                args.append(self._expression())
            cur.expect(")")
            return FunctionCall(name, tuple(args))
        if word == "TRUE" and cur.take_keyword("TRUE"):
            return Constant(Literal("true", datatype=_XSD_BOOLEAN))
        if word == "FALSE" and cur.take_keyword("FALSE"):
            return Constant(Literal("false", datatype=_XSD_BOOLEAN))
        if word is not None and _PNAME_RE.match(cur.text, cur.pos):
            return Constant(self._pname())
        raise cur.error("expected expression")

    # -- graph patterns ----------------------------------------------------

    def _group(self) -> GroupPattern:
        cur = self.cur
        cur.expect("{")
        group = GroupPattern()
        while True:
            if cur.take("}"):
                return group
            if cur.eof():
                raise cur.error("unterminated group pattern")
            word = cur.keyword()
            if word in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedFeature(word)
            if word == "FILTER":
                cur.take_keyword("FILTER")
                cur.skip_ws()
                if cur.peek() == "(":
                    cur.expect("(")
                    group.filters.append(self._expression())
                    cur.expect(")")
                else:
                    group.filters.append(self._primary_expression())
                cur.take(".")
                continue
            if word == "OPTIONAL":
                cur.take_keyword("OPTIONAL")
                group.optionals.append(self._group())
                cur.take(".")
                continue
            if cur.peek() == "{":
                left = self._group()
                if cur.take_keyword("UNION"):
                    right = self._group()
                    while cur.take_keyword("UNION"):
                        # fold A UNION B UNION C left-associatively
                        extra = self._group()
                        folded = GroupPattern(unions=[(left, right)])
                        left, right = folded, extra
                    group.unions.append((left, right))
                else:
                    # plain nested group: fold its contents into the parent
                    group.triples.extend(left.triples)
                    group.filters.extend(left.filters)
                    group.optionals.extend(left.optionals)
                    group.unions.extend(left.unions)
                cur.take(".")
                continue
            self._triples_block(group)
        return group

    def _triples_block(self, group: GroupPattern) -> None:
        cur = self.cur
        subject = self._pattern_term()
        while True:
            predicate = self._pattern_term(as_predicate=True)
            while True:
                obj = self._pattern_term()
                group.triples.append(TriplePattern(subject, predicate, obj))
                if cur.take(","):
                    continue
                break
            if cur.take(";"):
                if cur.peek() in ("}", "."):
                    break
                continue
            break
        cur.take(".")

    # -- whole query ---------------------------------------------------------

    def parse(self) -> Query:
        cur = self.cur
        while True:
            word = cur.keyword()
            if word == "PREFIX":
                cur.take_keyword("PREFIX")
                cur.skip_ws()
                m = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:").match(cur.text, cur.pos)
                if not m:
                    raise cur.error("expected prefix name")
                cur.pos = m.end()
                iri = self._iriref()
                self.prefixes[m.group(1) or ""] = iri.value
                continue
            if word == "BASE":
                raise UnsupportedFeature("BASE")
            break

        word = cur.keyword()
        if word is None:
            raise cur.error("expected SELECT")
        if word in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(word)
        if word != "SELECT":
            raise cur.error(f"expected SELECT, found {word!r}")
        cur.take_keyword("SELECT")

        distinct = bool(cur.take_keyword("DISTINCT"))
        if cur.take_keyword("REDUCED"):
            raise UnsupportedFeature("REDUCED")

        projection: Optional[list[str]] = None
        if cur.take("*"):
            projection = None
        else:
            projection = []
            while cur.peek() in ("?", "$"):
                cur.skip_ws()
                m = _VAR_RE.match(cur.text, cur.pos)
                if not m:
                    raise cur.error("malformed variable")
                cur.pos = m.end()
                if m.group(1) not in projection:
                    projection.append(m.group(1))
            if not projection:
                raise cur.error("projection needs at least one variable or *")

        cur.take_keyword("WHERE")
        where = self._group()

        order_by: list[tuple[str, bool]] = []
        limit: Optional[int] = None
        offset = 0
        while not cur.eof():
            word = cur.keyword()
            if word == "ORDER":
                cur.take_keyword("ORDER")
                if not cur.take_keyword("BY"):
                    raise cur.error("expected BY after ORDER")
                while True:
                    ascending = True
                    if cur.take_keyword("ASC"):
                        cur.expect("(")
                        var = self._require_var()
                        cur.expect(")")
                    elif cur.take_keyword("DESC"):
                        cur.expect("(")
                        var = self._require_var()
                        cur.expect(")")
                        ascending = False
                    elif cur.peek() in ("?", "$"):
                        var = self._require_var()
                    else:
                        break
                    order_by.append((var, ascending))
                if not order_by:
                    raise cur.error("ORDER BY needs at least one variable")
                continue
            if word == "LIMIT":
                cur.take_keyword("LIMIT")
                limit = self._require_int()
                continue
            if word == "OFFSET":
                cur.take_keyword("OFFSET")
                offset = self._require_int()
                continue
            if word in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedFeature(word)
            raise cur.error(f"unexpected trailing content {cur.peek(12)!r}")

        query = Query(projection=projection, distinct=distinct, where=where,
                      order_by=order_by, limit=limit, offset=offset)
        pattern_vars = set(where.variables())
        query.unbound_projection = [v for v in (projection or []) if v not in pattern_vars]
        return query

    def _require_var(self) -> str:
        cur = self.cur
        cur.skip_ws()
        m = _VAR_RE.match(cur.text, cur.pos)
        if not m:
            raise cur.error("expected variable")
        cur.pos = m.end()
        return m.group(1)

    def _require_int(self) -> int:
        cur = self.cur
        cur.skip_ws()
        m = re.compile(r"\d+").match(cur.text, cur.pos)
        if not m:
            raise cur.error("expected a non-negative integer")
        cur.pos = m.end()
        return int(m.group(0))


def parse_query(text: str) -> Query:
    """Parse a SELECT query; raises SparqlSyntaxError or UnsupportedFeature."""
    return SparqlParser(text).parse()
