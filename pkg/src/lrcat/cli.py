"""Operator command line.

Subcommands: ingest, pipeline, dedup, linkcheck, stats, eval, serve, dump,
vocab. Configuration is a plain UTF-8 key = value file (see
fixtures/pipeline.conf for a working example); no environment-variable
magic.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import dedup as dedup_mod
from . import vocab
from .evalharness import histogram_tsv, language_histogram, parse_queryset, parse_rows_file, run_eval
from .harmonize import (
    DEFAULT_THRESHOLD,
    LanguageTable,
    LicenseRegistry,
    METRIC_DICE,
    METRICS,
    TypeGazetteer,
    harmonize_record,
)
from .ingest import IngestReport, ingest_dcat_json, ingest_xml, load_ruleset
from .linkcheck import FetchPolicy, check_urls, format_report, resolvability
from .records import CatalogRecord
from .server import Portal, serve_forever
from .store import TripleStore, completeness, corpus_stats, corpus_stats_tsv
from .vocab import DEFAULT_BASE, FACET_PROPERTIES


class ConfigError(ValueError):
    pass


@dataclass(slots=True)
class SourceConfig:
    name: str
    kind: str  # xml | dcat-json
    path: Path
    repo: str
    ruleset: Optional[Path] = None
    root_tags: Optional[list[str]] = None
    base_url: Optional[str] = None  # resolves relative references in the source


@dataclass(slots=True)
class PipelineConfig:
    base: str = DEFAULT_BASE
    out: Path = Path("out")
    threshold: float = DEFAULT_THRESHOLD
    metric: str = METRIC_DICE
    dedup_strategy: str = dedup_mod.STRATEGY_BOTH
    languages_path: Optional[Path] = None
    gazetteer_path: Optional[Path] = None
    licenses_path: Optional[Path] = None
    sources: list[SourceConfig] = field(default_factory=list)


def load_config(path: Path) -> PipelineConfig:
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw: dict[str, str] = {}
    for line_no, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        key, _, value = stripped.partition("=")
        raw[key.strip()] = value.strip()

    config = PipelineConfig()
    base_dir = path.parent
    if "base" in raw:
        config.base = raw.pop("base")
    if "out" in raw:
        config.out = base_dir / raw.pop("out")
    if "threshold" in raw:
        config.threshold = float(raw.pop("threshold"))
    if "metric" in raw:
        metric = raw.pop("metric")
        if metric not in METRICS:
            raise ConfigError(f"unknown metric {metric!r}")
        config.metric = metric
    if "dedup.strategy" in raw:
        strategy = raw.pop("dedup.strategy")
        if strategy not in dedup_mod.STRATEGIES:
            raise ConfigError(f"unknown dedup strategy {strategy!r}")
        config.dedup_strategy = strategy
    for table_key, attr in (("languages", "languages_path"), ("gazetteer", "gazetteer_path"), ("licenses", "licenses_path")):
        if table_key in raw:
            setattr(config, attr, base_dir / raw.pop(table_key))

    source_names = sorted({key.split(".")[1] for key in raw if key.startswith("source.")})
    for name in source_names:
        def take(field_name: str, required: bool = False) -> Optional[str]:
            key = f"source.{name}.{field_name}"
            if key in raw:
                return raw.pop(key)
            if required:
                raise ConfigError(f"missing {key}")
            return None

        kind = take("kind", required=True)
        if kind not in ("xml", "dcat-json"):
            raise ConfigError(f"source.{name}.kind must be xml or dcat-json")
        source_path = base_dir / take("path", required=True)
        if not source_path.exists():
            raise ConfigError(f"source.{name}.path does not exist: {source_path}")
        repo = take("repo", required=True)
        ruleset_raw = take("ruleset")
        ruleset = base_dir / ruleset_raw if ruleset_raw else None
        if kind == "xml":
            if ruleset is None:
                raise ConfigError(f"source.{name} is xml but has no ruleset")
            if not ruleset.exists():
                raise ConfigError(f"source.{name}.ruleset does not exist: {ruleset}")
        tags_raw = take("roottags")
        root_tags = [t.strip() for t in tags_raw.split(",") if t.strip()] if tags_raw else None
        base_url = take("baseurl")
        config.sources.append(SourceConfig(name, kind, source_path, repo, ruleset, root_tags, base_url))

    unknown = [key for key in raw if not key.startswith("source.")]
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return config


@dataclass(slots=True)
class PipelineResult:
    records: list[CatalogRecord]
    store: TripleStore
    report: IngestReport
    per_source: list[tuple[str, int, int]]
    clusters: list


def _tables(config: PipelineConfig):
    table = (
        LanguageTable.from_tsv(config.languages_path.read_text("utf-8"))
        if config.languages_path
        else LanguageTable.embedded()
    )
    gazetteer = (
        TypeGazetteer.from_tsv(config.gazetteer_path.read_text("utf-8"))
        if config.gazetteer_path
        else TypeGazetteer.embedded()
    )
    registry = (
        LicenseRegistry.from_tsv(config.licenses_path.read_text("utf-8"))
        if config.licenses_path
        else LicenseRegistry.embedded()
    )
    return table, gazetteer, registry


def run_pipeline_config(config: PipelineConfig) -> PipelineResult:
    """ingest -> harmonize -> dedup/merge -> store build."""
    table, gazetteer, registry = _tables(config)
    combined_report = IngestReport()
    all_records: list[CatalogRecord] = []
    per_source: list[tuple[str, int, int]] = []

    for source in sorted(config.sources, key=lambda s: s.name):
        data = source.path.read_bytes()
        if source.kind == "xml":
            ruleset = load_ruleset(source.ruleset.read_bytes(), source.name)
            records, report = ingest_xml(
                data,
                ruleset,
                source.repo,
                root_tags=source.root_tags,
                base=config.base,
                source_base_url=source.base_url,
            )
        else:
            records, report = ingest_dcat_json(data, source.repo, base=config.base)
        harmonized = [
            harmonize_record(record, table, gazetteer, registry, config.metric, config.threshold)
            for record in records
        ]
        from .records import to_graph

        per_source.append((source.name, len(harmonized), sum(len(to_graph(r)) for r in harmonized)))
        all_records.extend(harmonized)
        combined_report.merge(report)

    clusters = dedup_mod.find_duplicates(all_records, config.dedup_strategy)
    merged = dedup_mod.merge_all(all_records, clusters)
    store = TripleStore.load(merged)
    return PipelineResult(merged, store, combined_report, per_source, clusters)


def run_pipeline(config_path: Path, out_dir: Optional[Path] = None) -> int:
    """Full pipeline with reports written to the output directory.

    Deterministic: identical inputs produce byte-identical outputs. On
    failure, any partially written outputs are removed and the exit status
    is nonzero.
    """
    written: list[Path] = []
    try:
        config = load_config(config_path)
        if out_dir is not None:
            config.out = out_dir
        result = run_pipeline_config(config)
        config.out.mkdir(parents=True, exist_ok=True)

        def write(name: str, data: bytes) -> None:
            target = config.out / name
            target.write_bytes(data)
            written.append(target)

        write("dump.nt", result.store.dump())
        write("ingest_report.tsv", result.report.to_tsv().encode("utf-8"))
        write("clusters.tsv", dedup_mod.cluster_report(result.clusters).encode("utf-8"))
        write("completeness.tsv", completeness(result.store).to_tsv().encode("utf-8"))
        write("corpus_stats.tsv", corpus_stats_tsv(corpus_stats(result.per_source)).encode("utf-8"))
        write("language_histogram.tsv", histogram_tsv(language_histogram(result.store)).encode("utf-8"))
        print(f"pipeline complete: {len(result.records)} records, {len(result.store)} triples -> {config.out}")
        return 0
    except Exception as exc:
        for target in written:
            try:
                target.unlink()
            except OSError:
                pass
        print(f"pipeline failed: {exc}", file=sys.stderr)
        return 1


# -- subcommand handlers -------------------------------------------------------


def _cmd_ingest(args) -> int:
    data = Path(args.path).read_bytes()
    if args.kind == "xml":
        if not args.ruleset:
            print("xml ingestion needs --ruleset", file=sys.stderr)
            return 2
        ruleset = load_ruleset(Path(args.ruleset).read_bytes(), Path(args.ruleset).name)
        root_tags = args.roottags.split(",") if args.roottags else None
        records, report = ingest_xml(data, ruleset, args.repo, root_tags=root_tags, base=args.base)
    else:
        records, report = ingest_dcat_json(data, args.repo, base=args.base)
    print(report.to_tsv(), end="")
    for record in records[: args.show]:
        title = record.titles[0][0] if record.titles else "(untitled)"
        print(f"{record.id}\t{title}")
    return 0


def _cmd_pipeline(args) -> int:
    return run_pipeline(Path(args.config), Path(args.out) if args.out else None)


def _cmd_dedup(args) -> int:
    config = load_config(Path(args.config))
    if args.strategy:
        config.dedup_strategy = {"title": dedup_mod.STRATEGY_TITLE, "url": dedup_mod.STRATEGY_URL, "both": dedup_mod.STRATEGY_BOTH}[args.strategy]
    result = run_pipeline_config(config)
    print(dedup_mod.cluster_report(result.clusters), end="")
    return 0


def _cmd_linkcheck(args) -> int:
    if args.urls:
        urls = [line.strip() for line in Path(args.urls).read_text("utf-8").splitlines() if line.strip() and not line.startswith("#")]
    else:
        config = load_config(Path(args.config))
        result = run_pipeline_config(config)
        urls = sorted({url for record in result.records for url in record.access_urls})
    policy = FetchPolicy(
        max_redirects=args.max_redirects,
        timeout=args.timeout,
        per_host_delay=args.delay,
        concurrency=args.concurrency,
    )
    results = check_urls(urls, policy, cache_path=Path(args.cache) if args.cache else None)
    reach = resolvability(results)
    print(f"# resolved\t{reach.resolved}/{reach.total}\t{100.0 * reach.fraction:.1f}%")
    if reach.resolved:
        print(format_report(results).to_tsv(), end="")
    for result_row in results:
        status = "ok" if result_row.resolved else (result_row.reason or "error")
        print(f"{result_row.url}\t{status}\t{result_row.media_type or ''}")
    return 0


def _cmd_stats(args) -> int:
    if args.dump:
        store = TripleStore.from_dump(Path(args.dump).read_bytes())
        print(completeness(store).to_tsv(), end="")
        print(histogram_tsv(language_histogram(store)), end="")
        return 0
    config = load_config(Path(args.config))
    result = run_pipeline_config(config)
    print(corpus_stats_tsv(corpus_stats(result.per_source)), end="")
    print(completeness(result.store).to_tsv(), end="")
    print(histogram_tsv(language_histogram(result.store)), end="")
    return 0


def _cmd_eval(args) -> int:
    if args.rows:
        report = parse_rows_file(Path(args.rows).read_text("utf-8"))
    else:
        if not args.queries or not args.dump:
            print("need --rows, or --queries with --dump", file=sys.stderr)
            return 2
        store = TripleStore.from_dump(Path(args.dump).read_bytes())
        query_set = parse_queryset(Path(args.queries).read_text("utf-8"))
        report = run_eval(query_set, store)
    print(report.to_tsv(), end="")
    return 0


def _cmd_serve(args) -> int:
    if args.dump:
        store = TripleStore.from_dump(Path(args.dump).read_bytes())
    else:
        config = load_config(Path(args.config))
        store = run_pipeline_config(config).store
    portal = Portal(store=store, query_time_budget=args.budget, ui_dir=Path(args.ui) if args.ui else None)
    serve_forever(portal, args.host, args.port)
    return 0


def _cmd_dump(args) -> int:
    config = load_config(Path(args.config))
    result = run_pipeline_config(config)
    sys.stdout.buffer.write(result.store.dump())
    return 0


def _cmd_vocab(_args) -> int:
    for facet, iri in FACET_PROPERTIES.items():
        print(f"{facet.value}\t{iri}")
    for key, iri in vocab.EXTRA_PROPERTIES.items():
        print(f"extras.{key}\t{iri}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrcat", description="Language-resource catalog harmonizer and portal")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest one source file and print the report")
    p.add_argument("--kind", choices=["xml", "dcat-json"], required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--repo", required=True)
    p.add_argument("--ruleset")
    p.add_argument("--roottags")
    p.add_argument("--base", default=DEFAULT_BASE)
    p.add_argument("--show", type=int, default=5, help="records to preview")
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("pipeline", help="run ingest -> harmonize -> dedup -> store -> reports")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_pipeline)

    p = sub.add_parser("dedup", help="print the duplicate cluster report")
    p.add_argument("--config", required=True)
    p.add_argument("--strategy", choices=["title", "url", "both"])
    p.set_defaults(handler=_cmd_dedup)

    p = sub.add_parser("linkcheck", help="resolve access URLs and classify formats")
    p.add_argument("--config")
    p.add_argument("--urls", help="file with one URL per line (overrides --config)")
    p.add_argument("--cache")
    p.add_argument("--timeout", type=float, default=10.0)
    p.add_argument("--delay", type=float, default=0.0)
    p.add_argument("--concurrency", type=int, default=4)
    p.add_argument("--max-redirects", type=int, default=5)
    p.set_defaults(handler=_cmd_linkcheck)

    p = sub.add_parser("stats", help="completeness, corpus sizes, language histogram")
    p.add_argument("--config")
    p.add_argument("--dump")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("eval", help="relevance evaluation harness")
    p.add_argument("--rows", help="precomputed per-query rows file")
    p.add_argument("--queries", help="query set file (QUERY/SPARQL/JUDGMENTS sections)")
    p.add_argument("--dump", help="store dump to evaluate against")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("serve", help="run the portal HTTP server")
    p.add_argument("--config")
    p.add_argument("--dump")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8355)
    p.add_argument("--ui", help="directory with the built frontend bundle")
    p.add_argument("--budget", type=float, default=5.0, help="per-query time budget in seconds")
    p.set_defaults(handler=_cmd_serve)

    p = sub.add_parser("dump", help="write the canonical N-Triples dump to stdout")
    p.add_argument("--config", required=True)
    p.set_defaults(handler=_cmd_dump)

    p = sub.add_parser("vocab", help="print the facet-to-property table")
    p.set_defaults(handler=_cmd_vocab)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        if not args.config and not args.dump:
            print("serve needs --config or --dump", file=sys.stderr)
            return 2
    if args.command == "stats" and not args.config and not args.dump:
        print("stats needs --config or --dump", file=sys.stderr)
        return 2
    if args.command == "linkcheck" and not args.config and not args.urls:
        print("linkcheck needs --config or --urls", file=sys.stderr)
        return 2
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
