"""SPARQL SELECT subset: parser, evaluator, result serializers."""

from __future__ import annotations

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
from .evaluator import (
    EvalTimeout,
    EvaluationError,
    SolutionSequence,
    evaluate,
)
from .parser import SparqlSyntaxError, UnsupportedFeature, parse_query
from .results import to_json_results, to_tsv_results

__all__ = [
    "Comparison",
    "Constant",
    "EvalTimeout",
    "EvaluationError",
    "Expression",
    "FunctionCall",
    "GroupPattern",
    "LogicalAnd",
    "LogicalNot",
    "LogicalOr",
    "Query",
    "SolutionSequence",
    "SparqlSyntaxError",
    "TriplePattern",
    "UnsupportedFeature",
    "Var",
    "evaluate",
    "parse_query",
    "to_json_results",
    "to_tsv_results",
]
