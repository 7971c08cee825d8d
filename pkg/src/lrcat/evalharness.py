"""Relevance-evaluation harness for labeled query sets.

Two ways in:

* live mode: run a query set against a loaded store (free text through the
  facet search, SPARQL through the evaluator) and judge returned records
  against the set's judgments. Unjudged results count as irrelevant, the
  pessimistic default, so scores are never inflated by missing labels.
* rows-precomputed mode: average already-measured per-query rows.

Averages are arithmetic means over the whole query set: a query marked
excluded contributes zeros but stays in the denominator, so reported
averages match a study where one compiled request could not be judged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .sparql import EvalTimeout, EvaluationError, SparqlSyntaxError, UnsupportedFeature, evaluate, parse_query
from .store import TripleStore, facet_search
from .rdf import Iri

MODE_FREETEXT = "freetext"
MODE_SPARQL = "sparql"
MODES = (MODE_FREETEXT, MODE_SPARQL)

VERDICT_RELEVANT = "Relevant"
VERDICT_RELATED = "Related"
VERDICT_IRRELEVANT = "Irrelevant"


class QuerySetError(ValueError):
    pass


@dataclass(slots=True)
class EvalQuery:
    query_id: str
    free_text: Optional[str] = None
    sparql: Optional[str] = None
    excluded: bool = False


@dataclass(slots=True)
class EvalQuerySet:
    queries: list[EvalQuery] = field(default_factory=list)
    judgments: dict[tuple[str, str], str] = field(default_factory=dict)

    def validate(self, store: Optional[TripleStore] = None) -> None:
        for query in self.queries:
            if not query.excluded and query.free_text is None and query.sparql is None:
                raise QuerySetError(f"query {query.query_id} has no mode")
        if store is not None:
            for (_, record_id) in self.judgments:
                if record_id not in store.records:
                    raise QuerySetError(f"judged record {record_id} is not in the store")


def parse_queryset(text: str) -> EvalQuerySet:
    """Sections QUERY / SPARQL / JUDGMENTS / EXCLUDED, tab-separated rows."""
    qs = EvalQuerySet()
    by_id: dict[str, EvalQuery] = {}
    section = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        upper = line.strip().upper()
        if upper in ("QUERY", "SPARQL", "JUDGMENTS", "EXCLUDED"):
            section = upper
            continue
        if section is None:
            raise QuerySetError(f"line {line_no}: content before any section header")
        parts = line.split("\t")
        if section == "QUERY":
            if len(parts) != 2:
                raise QuerySetError(f"line {line_no}: expected id<TAB>text")
            query = by_id.setdefault(parts[0], EvalQuery(parts[0]))
            query.free_text = parts[1]
        elif section == "SPARQL":
            if len(parts) != 2:
                raise QuerySetError(f"line {line_no}: expected id<TAB>query")
            query = by_id.setdefault(parts[0], EvalQuery(parts[0]))
            query.sparql = parts[1]
        elif section == "EXCLUDED":
            query = by_id.setdefault(parts[0], EvalQuery(parts[0]))
            query.excluded = True
        else:
            if len(parts) != 3:
                raise QuerySetError(f"line {line_no}: expected queryId<TAB>recordId<TAB>verdict")
            if parts[2] not in (VERDICT_RELEVANT, VERDICT_RELATED, VERDICT_IRRELEVANT):
                raise QuerySetError(f"line {line_no}: unknown verdict {parts[2]!r}")
            qs.judgments[(parts[0], parts[1])] = parts[2]
    qs.queries = [by_id[key] for key in by_id]
    return qs


@dataclass(slots=True)
class EvalRow:
    query_id: str
    mode: str
    results: int
    relevant_pct: float
    excluded: bool = False
    error: Optional[str] = None


@dataclass(slots=True)
class EvalReport:
    rows: list[EvalRow]
    query_count: int

    def mode_rows(self, mode: str) -> list[EvalRow]:
        return [row for row in self.rows if row.mode == mode]

    def averages(self, mode: str) -> tuple[float, float]:
        """(average result count, average relevant %) over the query set."""
        if self.query_count == 0:
            return (0.0, 0.0)
        rows = self.mode_rows(mode)
        return (
            sum(row.results for row in rows) / self.query_count,
            sum(row.relevant_pct for row in rows) / self.query_count,
        )

    def to_tsv(self) -> str:
        lines = ["query\tmode\tresults\trelevant%\tflags"]
        for row in self.rows:
            flags = []
            if row.excluded:
                flags.append("excluded")
            if row.error:
                flags.append(f"error:{row.error}")
            lines.append(
                f"{row.query_id}\t{row.mode}\t{row.results}\t{row.relevant_pct:.2f}\t{','.join(flags)}"
            )
        for mode in MODES:
            avg_results, avg_relevant = self.averages(mode)
            lines.append(f"average\t{mode}\t{avg_results:.2f}\t{avg_relevant:.2f}\t")
        # internal consistency: averages recomputed from the rows above
        for mode in MODES:
            rows = self.mode_rows(mode)
            check_results = sum(r.results for r in rows) / self.query_count if self.query_count else 0.0
            check_relevant = sum(r.relevant_pct for r in rows) / self.query_count if self.query_count else 0.0
            lines.append(f"# recheck\t{mode}\t{check_results:.2f}\t{check_relevant:.2f}\t")
        return "\n".join(lines) + "\n"


def _relevant_pct(returned_ids: list[str], query_id: str, judgments: dict) -> float:
    if not returned_ids:
        return 0.0
    relevant = sum(
        1 for rid in returned_ids if judgments.get((query_id, rid)) == VERDICT_RELEVANT
    )
    return 100.0 * relevant / len(returned_ids)


def run_eval(query_set: EvalQuerySet, store: TripleStore, time_budget: float = 10.0) -> EvalReport:
    """Run every query in both its modes and judge the returned records."""
    query_set.validate(store)
    rows: list[EvalRow] = []
    for query in query_set.queries:
        if query.excluded:
            for mode in MODES:
                rows.append(EvalRow(query.query_id, mode, 0, 0.0, excluded=True))
            continue
        if query.free_text is not None:
            result = facet_search(store, text_query=query.free_text, page_size=max(1, len(store.records)))
            ids = [summary.id for summary in result.results]
            rows.append(EvalRow(query.query_id, MODE_FREETEXT, result.total, _relevant_pct(ids, query.query_id, query_set.judgments)))
        if query.sparql is not None:
            try:
                solutions = evaluate(parse_query(query.sparql), store, time_budget=time_budget)
            except (SparqlSyntaxError, UnsupportedFeature, EvaluationError, EvalTimeout) as exc:
                rows.append(EvalRow(query.query_id, MODE_SPARQL, 0, 0.0, error=type(exc).__name__))
                continue
            ids = []
            for solution in solutions.rows:
                for name in solutions.vars:
                    value = solution.get(name)
                    if isinstance(value, Iri):
                        ids.append(value.value)
                        break
            rows.append(EvalRow(query.query_id, MODE_SPARQL, len(solutions.rows), _relevant_pct(ids, query.query_id, query_set.judgments)))
    return EvalReport(rows=rows, query_count=len(query_set.queries))


def parse_rows_file(text: str) -> EvalReport:
    """Precomputed rows: `id<TAB>mode<TAB>results<TAB>relevantPct` or
    `id<TAB>excluded`. The denominator is the number of distinct ids."""
    rows: list[EvalRow] = []
    ids: list[str] = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if parts[0] not in ids:
            ids.append(parts[0])
        if len(parts) == 2 and parts[1] == "excluded":
            for mode in MODES:
                rows.append(EvalRow(parts[0], mode, 0, 0.0, excluded=True))
            continue
        if len(parts) != 4:
            raise QuerySetError(f"line {line_no}: expected id, mode, results, relevant%")
        if parts[1] not in MODES:
            raise QuerySetError(f"line {line_no}: unknown mode {parts[1]!r}")
        rows.append(EvalRow(parts[0], parts[1], int(parts[2]), float(parts[3])))
    return EvalReport(rows=rows, query_count=len(ids))


# -- language histogram ------------------------------------------------------

HISTOGRAM_BUCKETS = ("1", "2", "3", "4", "5-19", ">20", "unspecified")


def language_histogram(store: TripleStore) -> dict[str, int]:
    """Resources bucketed by how many distinct ISO codes they carry."""
    counts = {bucket: 0 for bucket in HISTOGRAM_BUCKETS}
    for record in store.records.values():
        codes = {ref.iso639_3 for ref in record.languages if ref.iso639_3}
        n = len(codes)
        if n == 0:
            counts["unspecified"] += 1
        elif n <= 4:
            counts[str(n)] += 1
        elif n <= 19:
            counts["5-19"] += 1
        else:
            counts[">20"] += 1
    return counts


def histogram_tsv(counts: dict[str, int]) -> str:
    lines = ["Language count\tResources"]
    for bucket in HISTOGRAM_BUCKETS:
        lines.append(f"{bucket}\t{counts[bucket]}")
    return "\n".join(lines) + "\n"
