"""Query evaluation against the triple store.

Basic graph patterns run as index-backed nested-loop joins, ordered by a
selectivity estimate (more bound positions first, smaller index ranges
first). Filters use SPARQL's error-as-failure discipline: a type error
inside a filter drops the row instead of aborting the query. Only a
malformed regex pattern is a reportable evaluation error.

A per-query time budget bounds runaway evaluations.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..rdf import BlankNode, Iri, Literal, Term
from ..rdf.terms import XSD_NS
from ..store import TripleStore
from .ast import (
    Comparison,
    Constant,
    Expression,
    FunctionCall,
    GroupPattern,
    LogicalAnd,
    LogicalNot,
    LogicalOr,
    Query,
    TriplePattern,
    Var,
)

Solution = dict[str, Term]

_NUMERIC_DATATYPES = {
    XSD_NS + "integer",
    XSD_NS + "decimal",
    XSD_NS + "double",
    XSD_NS + "float",
    XSD_NS + "int",
    XSD_NS + "long",
    XSD_NS + "nonNegativeInteger",
}
_XSD_BOOLEAN = XSD_NS + "boolean"

_FORBIDDEN_REGEX = re.compile(r"\\[1-9]|\(\?P=|\(\?<[=!]")


class EvaluationError(ValueError):
    """Reportable evaluation failure (malformed regex pattern)."""


class EvalTimeout(RuntimeError):
    def __init__(self, budget: float) -> None:
        super().__init__(f"query exceeded its time budget of {budget:.1f}s")
        self.budget = budget


@dataclass(slots=True)
class SolutionSequence:
    vars: list[str]
    rows: list[Solution] = field(default_factory=list)


class _FilterFailure(Exception):
    """Internal: three-valued logic error; the row just fails the filter."""


def _is_numeric(term: Term) -> bool:
    return isinstance(term, Literal) and term.datatype in _NUMERIC_DATATYPES


def _numeric_value(term: Literal) -> float:
    try:
        return float(term.lexical)
    except ValueError:
        raise _FilterFailure from None


def _string_value(term: Term) -> str:
    if isinstance(term, Literal) and (term.datatype is None or term.datatype == XSD_NS + "string"):
        return term.lexical
    if isinstance(term, Literal) and term.lang is not None:
        return term.lexical
    raise _FilterFailure


def _ebv(value) -> bool:
    """Effective boolean value per SPARQL."""
    if isinstance(value, bool):
        return value
    if isinstance(value, Literal):
        if value.datatype == _XSD_BOOLEAN:
            return value.lexical.strip() == "true"
        if _is_numeric(value):
            return _numeric_value(value) != 0.0
        if value.datatype is None or value.datatype == XSD_NS + "string":
            return len(value.lexical) > 0
    raise _FilterFailure


class _FilterEvaluator:
    def __init__(self) -> None:
        self._regex_cache: dict[tuple[str, str], re.Pattern] = {}

    def compile_regex(self, pattern: str, flags: str) -> re.Pattern:
        key = (pattern, flags)
        cached = self._regex_cache.get(key)
        if cached is not None:
            return cached
        if _FORBIDDEN_REGEX.search(pattern):
            raise EvaluationError(f"regex feature outside the supported subset: {pattern!r}")
        re_flags = 0
        for flag in flags:
            if flag == "i":
                re_flags |= re.IGNORECASE
            elif flag == "s":
                re_flags |= re.DOTALL
            elif flag == "m":
                re_flags |= re.MULTILINE
            else:
                raise EvaluationError(f"unsupported regex flag {flag!r}")
        try:
            compiled = re.compile(pattern, re_flags)
        except re.error as exc:
            raise EvaluationError(f"malformed regex {pattern!r}: {exc}") from None
        self._regex_cache[key] = compiled
        return compiled

    def evaluate(self, expr: Expression, row: Solution):
        if isinstance(expr, Var):
            value = row.get(expr.name)
            if value is None:
                raise _FilterFailure
            return value
        if isinstance(expr, Constant):
            return expr.value
        if isinstance(expr, LogicalAnd):
            result = True
            error = False
            for part in expr.parts:
                try:
                    if not _ebv(self.evaluate(part, row)):
                        return False
                except _FilterFailure:
                    error = True
            if error:
                raise _FilterFailure
            return result
        if isinstance(expr, LogicalOr):
            error = False
            for part in expr.parts:
                try:
                    if _ebv(self.evaluate(part, row)):
                        return True
                except _FilterFailure:
                    error = True
            if error:
                raise _FilterFailure
            return False
        if isinstance(expr, LogicalNot):
            return not _ebv(self.evaluate(expr.inner, row))
        if isinstance(expr, Comparison):
            return self._compare(expr, row)
        if isinstance(expr, FunctionCall):
            return self._call(expr, row)
        raise _FilterFailure

    def _compare(self, expr: Comparison, row: Solution) -> bool:
        lhs = self.evaluate(expr.lhs, row)
        rhs = self.evaluate(expr.rhs, row)
        if isinstance(lhs, bool) or isinstance(rhs, bool):
            if expr.op in ("=", "!="):
                equal = _ebv_or_fail(lhs) == _ebv_or_fail(rhs)
                return equal if expr.op == "=" else not equal
            raise _FilterFailure
        if expr.op in ("=", "!="):
            if _is_numeric(lhs) and _is_numeric(rhs):
                equal = _numeric_value(lhs) == _numeric_value(rhs)
            else:
                equal = lhs == rhs
            return equal if expr.op == "=" else not equal
        # ordering comparisons
        if _is_numeric(lhs) and _is_numeric(rhs):
            a, b = _numeric_value(lhs), _numeric_value(rhs)
        else:
            a, b = _string_value(lhs), _string_value(rhs)
        if expr.op == "<":
            return a < b
        if expr.op == ">":
            return a > b
        if expr.op == "<=":
            return a <= b
        return a >= b

    def _call(self, expr: FunctionCall, row: Solution):
        name = expr.name
        if name == "lang":
            value = self.evaluate(expr.args[0], row)
            if not isinstance(value, Literal):
                raise _FilterFailure
            return Literal(value.lang or "")
        if name == "lcase":
            value = self.evaluate(expr.args[0], row)
            if not isinstance(value, Literal):
                raise _FilterFailure
            return Literal(value.lexical.lower(), lang=value.lang, datatype=value.datatype)
        if name == "contains":
            if len(expr.args) != 2:
                raise _FilterFailure
            hay = _string_value(self.evaluate(expr.args[0], row))
            needle = _string_value(self.evaluate(expr.args[1], row))
            return needle in hay
        if name == "langmatches":
            if len(expr.args) != 2:
                raise _FilterFailure
            tag = _string_value(self.evaluate(expr.args[0], row)).lower()
            rng = _string_value(self.evaluate(expr.args[1], row)).lower()
            if rng == "*":
                return tag != ""
            return tag == rng or tag.startswith(rng + "-")
        if name == "regex":
            if len(expr.args) not in (2, 3):
                raise _FilterFailure
            text = _string_value(self.evaluate(expr.args[0], row))
            pattern = _string_value(self.evaluate(expr.args[1], row))
            flags = ""
            if len(expr.args) == 3:
                flags = _string_value(self.evaluate(expr.args[2], row))
            return self.compile_regex(pattern, flags).search(text) is not None
        raise _FilterFailure


def _ebv_or_fail(value) -> bool:
    return _ebv(value)


class _Deadline:
    def __init__(self, budget: Optional[float]) -> None:
        self.budget = budget
        self.expires = time.monotonic() + budget if budget is not None else None

    def check(self) -> None:
        if self.expires is not None and time.monotonic() > self.expires:
            raise EvalTimeout(self.budget or 0.0)


def _instantiate(pattern: TriplePattern, row: Solution) -> tuple[Optional[Term], Optional[Term], Optional[Term]]:
    out = []
    for part in (pattern.subject, pattern.predicate, pattern.object):
        if isinstance(part, Var):
            out.append(row.get(part.name))
        else:
            out.append(part)
    return tuple(out)  # type: ignore[return-value]


def _extend(pattern: TriplePattern, row: Solution, triple) -> Optional[Solution]:
    new = row
    for part, value in ((pattern.subject, triple.subject), (pattern.predicate, triple.predicate), (pattern.object, triple.object)):
        if isinstance(part, Var):
            bound = new.get(part.name)
            if bound is None:
                if new is row:
                    new = dict(row)
                new[part.name] = value
            elif bound != value:
                return None
    return new if new is not row else dict(row)


def _order_patterns(
    patterns: list[TriplePattern], store: TripleStore, initial_bound: Iterable[str] = ()
) -> list[TriplePattern]:
    """Greedy join order: most bound positions first, then the pattern whose
    constant prefix selects the smallest index range."""
    remaining = list(patterns)
    bound_vars: set[str] = set(initial_bound)
    ordered = []

    def bound_count(p: TriplePattern) -> int:
        return sum(
            1
            for part in (p.subject, p.predicate, p.object)
            if not isinstance(part, Var) or part.name in bound_vars
        )

    def constant_estimate(p: TriplePattern) -> int:
        s = None if isinstance(p.subject, Var) else store.term_id(p.subject)
        pr = None if isinstance(p.predicate, Var) else store.term_id(p.predicate)
        o = None if isinstance(p.object, Var) else store.term_id(p.object)
        for term, given in ((s, p.subject), (pr, p.predicate), (o, p.object)):
            if term is None and not isinstance(given, Var):
                return 0  # constant absent from the store: empty result
        if s is not None and pr is not None:
            return store.prefix_count("spo", (s, pr))
        if s is not None:
            return store.prefix_count("spo", (s,))
        if pr is not None and o is not None:
            return store.prefix_count("pos", (pr, o))
        if pr is not None:
            return store.prefix_count("pos", (pr,))
        if o is not None:
            return store.prefix_count("osp", (o,))
        return len(store)

    while remaining:
        best_index = min(
            range(len(remaining)),
            key=lambda i: (-bound_count(remaining[i]), constant_estimate(remaining[i]), i),
        )
        chosen = remaining.pop(best_index)
        ordered.append(chosen)
        bound_vars.update(chosen.variables())
    return ordered


def _eval_bgp(
    patterns: list[TriplePattern],
    store: TripleStore,
    base: Solution,
    deadline: _Deadline,
) -> list[Solution]:
    rows = [dict(base)]
    for pattern in _order_patterns(patterns, store, base.keys()):
        deadline.check()
        next_rows: list[Solution] = []
        for row in rows:
            s, p, o = _instantiate(pattern, row)
            for triple in store.match(s, p, o):
                deadline.check()
                extended = _extend(pattern, row, triple)
                if extended is not None:
                    next_rows.append(extended)
        rows = next_rows
        if not rows:
            break
    return rows


def _eval_group(
    group: GroupPattern,
    store: TripleStore,
    base_rows: list[Solution],
    deadline: _Deadline,
    filters: _FilterEvaluator,
) -> list[Solution]:
    rows: list[Solution] = []
    for base in base_rows:
        rows.extend(_eval_bgp(group.triples, store, base, deadline))

    for left, right in group.unions:
        unioned: list[Solution] = []
        for row in rows:
            deadline.check()
            unioned.extend(_eval_group(left, store, [row], deadline, filters))
            unioned.extend(_eval_group(right, store, [row], deadline, filters))
        rows = unioned

    for optional in group.optionals:
        with_optional: list[Solution] = []
        for row in rows:
            deadline.check()
            extensions = _eval_group(optional, store, [row], deadline, filters)
            with_optional.extend(extensions if extensions else [row])
        rows = with_optional

    for expr in group.filters:
        kept = []
        for row in rows:
            deadline.check()
            try:
                if _ebv(filters.evaluate(expr, row)):
                    kept.append(row)
            except _FilterFailure:
                continue
        rows = kept
    return rows


def _term_sort_key(term: Optional[Term]):
    if term is None:
        return (0, "", "", "")
    if isinstance(term, BlankNode):
        return (1, term.label, "", "")
    if isinstance(term, Iri):
        return (2, term.value, "", "")
    if _is_numeric(term):
        try:
            return (3, "", float(term.lexical), "")
        except ValueError:
            pass
    return (4, term.lexical, 0.0, (term.lang or "") + "|" + (term.datatype or ""))


def evaluate(query: Query, store: TripleStore, time_budget: Optional[float] = None) -> SolutionSequence:
    """Evaluate a parsed query; deterministic output, stable ORDER BY."""
    deadline = _Deadline(time_budget)
    filters = _FilterEvaluator()
    rows = _eval_group(query.where, store, [{}], deadline, filters)

    if query.order_by:
        for var, ascending in reversed(query.order_by):
            rows.sort(key=lambda row: _term_sort_key(row.get(var)), reverse=not ascending)

    result_vars = query.result_vars()
    projected = [
        {name: row[name] for name in result_vars if name in row}
        for row in rows
    ]

    if query.distinct:
        seen = set()
        unique = []
        for row in projected:
            key = tuple(sorted((name, _term_key(value)) for name, value in row.items()))
            if key not in seen:
                seen.add(key)
                unique.append(row)
        projected = unique

    start = query.offset
    end = None if query.limit is None else start + query.limit
    return SolutionSequence(vars=result_vars, rows=projected[start:end])


def _term_key(term: Term) -> tuple:
    if isinstance(term, Iri):
        return ("iri", term.value)
    if isinstance(term, BlankNode):
        return ("bnode", term.label)
    return ("lit", term.lexical, term.lang or "", term.datatype or "")
