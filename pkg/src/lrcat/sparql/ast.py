"""Query AST for the SELECT subset the portal evaluates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..rdf import Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Var, Term]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> list[str]:
        out = []
        for part in (self.subject, self.predicate, self.object):
            if isinstance(part, Var) and part.name not in out:
                out.append(part.name)
        return out


# -- filter expressions -----------------------------------------------------


@dataclass(frozen=True, slots=True)
class Constant:
    value: Term


@dataclass(frozen=True, slots=True)
class Comparison:
    op: str  # = != < > <= >=
    lhs: "Expression"
    rhs: "Expression"


@dataclass(frozen=True, slots=True)
class LogicalAnd:
    parts: tuple["Expression", ...]


@dataclass(frozen=True, slots=True)
class LogicalOr:
    parts: tuple["Expression", ...]


@dataclass(frozen=True, slots=True)
class LogicalNot:
    inner: "Expression"


@dataclass(frozen=True, slots=True)
class FunctionCall:
    name: str  # regex | langmatches | lang | contains | lcase
    args: tuple["Expression", ...]


Expression = Union[Var, Constant, Comparison, LogicalAnd, LogicalOr, LogicalNot, FunctionCall]


@dataclass(slots=True)
class GroupPattern:
    triples: list[TriplePattern] = field(default_factory=list)
    filters: list[Expression] = field(default_factory=list)
    optionals: list["GroupPattern"] = field(default_factory=list)
    unions: list[tuple["GroupPattern", "GroupPattern"]] = field(default_factory=list)

    def variables(self) -> list[str]:
        out: list[str] = []

        def add(names: list[str]) -> None:
            for name in names:
                if name not in out:
                    out.append(name)

        for pattern in self.triples:
            add(pattern.variables())
        for left, right in self.unions:
            add(left.variables())
            add(right.variables())
        for optional in self.optionals:
            add(optional.variables())
        return out


@dataclass(slots=True)
class Query:
    projection: Optional[list[str]]  # None means SELECT *
    distinct: bool
    where: GroupPattern
    order_by: list[tuple[str, bool]] = field(default_factory=list)  # (var, ascending)
    limit: Optional[int] = None
    offset: int = 0
    unbound_projection: list[str] = field(default_factory=list)

    def result_vars(self) -> list[str]:
        if self.projection is None:
            return self.where.variables()
        return list(self.projection)
