from pathlib import Path

import pytest

from lrcat.ingest import (
    IngestReport,
    RuleSyntaxError,
    XmlStreamError,
    ingest_dcat_json,
    ingest_xml,
    load_ruleset,
    repair_term,
)
from lrcat.rdf import Iri, Literal
from lrcat.records import facet_values
from lrcat.vocab import FacetKind

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture_ruleset(name: str):
    return load_ruleset((FIXTURES / "rules" / name).read_bytes(), name)


class TestLoadRuleset:
    def test_single_rule(self):
        ruleset = load_ruleset(b"resourceName/text() -> Title")
        assert len(ruleset.rules) == 1
        assert ruleset.rules[0].target == "Title"

    def test_bad_selector(self):
        with pytest.raises(RuleSyntaxError) as exc:
            load_ruleset(b"# fine\n][ -> Title")
        assert exc.value.line == 2

    def test_unknown_target(self):
        with pytest.raises(RuleSyntaxError):
            load_ruleset(b"a/text() -> Nonsense")

    def test_selector_must_terminate_in_text_or_attr(self):
        with pytest.raises(RuleSyntaxError):
            load_ruleset(b"a/b -> Title")

    def test_duplicate_rules_collapse(self):
        ruleset = load_ruleset(b"a/text() -> Title\na/text() -> Title\n")
        assert len(ruleset.rules) == 1

    def test_transforms(self):
        ruleset = load_ruleset(b"a/text() -> Language | splitOn(;)\nb/text() -> Title | trim\n")
        assert ruleset.rules[0].split_delimiter == ";"
        assert ruleset.rules[1].transform == "trim"

    def test_unknown_transform(self):
        with pytest.raises(RuleSyntaxError):
            load_ruleset(b"a/text() -> Title | shout")

    def test_completeness_flag(self):
        assert load_ruleset(b"a/text() -> Title").complete
        assert not load_ruleset(b"a/text() -> Description").complete

    def test_fixture_ruleset_yields_fig3_languages(self):
        ruleset = load_fixture_ruleset("metashare.rules")
        data = (FIXTURES / "metashare_sample.xml").read_bytes()
        records, report = ingest_xml(data, ruleset, "metashare", root_tags=["resourceInfo"])
        fig3 = records[0]
        assert facet_values(fig3, FacetKind.LANGUAGE) == ["es", "Spanish"]
        assert fig3.titles[0][0] == "Spanish LMF Apertium Dictionary"
        assert fig3.rights.raw == "GPL"
        assert fig3.extras["version"] == "1.0.2"
        assert report.failures == []


class TestIngestXml:
    def test_all_records_emitted(self):
        ruleset = load_fixture_ruleset("metashare.rules")
        data = (FIXTURES / "metashare_sample.xml").read_bytes()
        records, report = ingest_xml(data, ruleset, "metashare", root_tags=["resourceInfo"])
        assert len(records) == 3
        assert report.records_read == 3
        assert report.records_emitted == 3
        assert report.check_conservation()

    def test_unexpected_root_tag_is_failure(self):
        ruleset = load_ruleset(b"a/text() -> Title")
        data = b"<wrong><a>hi</a></wrong>"
        records, report = ingest_xml(data, ruleset, "clarin", root_tags=["record"])
        assert records == []
        assert report.records_read == 1
        assert len(report.failures) == 1

    def test_no_rule_matched_is_failure(self):
        ruleset = load_ruleset(b"missing/text() -> Title")
        data = b"<record><a>hi</a></record>"
        records, report = ingest_xml(data, ruleset, "clarin", root_tags=["record"])
        assert records == []
        assert [reason for _, reason in report.failures] == ["no rule matched"]

    def test_olac_fixture_title_completeness(self):
        ruleset = load_fixture_ruleset("olac.rules")
        data = (FIXTURES / "clarin_olac.xml").read_bytes()
        records, report = ingest_xml(data, ruleset, "clarin", root_tags=["OLAC-DcmiTerms"])
        assert len(records) == 20
        assert report.check_conservation()
        titled = sum(1 for r in records if facet_values(r, FacetKind.TITLE))
        assert titled == 17

    def test_split_on_transform(self):
        ruleset = load_fixture_ruleset("olac.rules")
        data = (FIXTURES / "clarin_olac.xml").read_bytes()
        records, _ = ingest_xml(data, ruleset, "clarin", root_tags=["OLAC-DcmiTerms"])
        packed = [r for r in records if len(r.languages) == 2]
        assert packed, "splitOn should have produced two languages somewhere"
        assert {ref.raw for ref in packed[0].languages} == {"es", "en"}

    def test_title_rule_ablation_drops_completeness_to_zero(self):
        ruleset = load_fixture_ruleset("olac.rules").without_target("Title")
        data = (FIXTURES / "clarin_olac.xml").read_bytes()
        records, _ = ingest_xml(data, ruleset, "clarin", root_tags=["OLAC-DcmiTerms"])
        assert all(not facet_values(r, FacetKind.TITLE) for r in records)

    def test_stream_error_carries_location(self):
        ruleset = load_ruleset(b"a/text() -> Title")
        with pytest.raises(XmlStreamError) as exc:
            ingest_xml(b"<record><a>unclosed</record>", ruleset, "clarin")
        assert "line" in str(exc.value)

    def test_determinism(self):
        ruleset = load_fixture_ruleset("olac.rules")
        data = (FIXTURES / "clarin_olac.xml").read_bytes()
        first, report1 = ingest_xml(data, ruleset, "clarin", root_tags=["OLAC-DcmiTerms"])
        second, report2 = ingest_xml(data, ruleset, "clarin", root_tags=["OLAC-DcmiTerms"])
        assert [r.id for r in first] == [r.id for r in second]
        assert first == second
        assert report1.to_tsv() == report2.to_tsv()

    def test_gzip_input(self):
        import gzip

        ruleset = load_ruleset(b"a/text() -> Title")
        data = gzip.compress(b"<record><a>hello</a></record>")
        records, _ = ingest_xml(data, ruleset, "clarin", root_tags=["record"])
        assert records[0].titles == [("hello", None)]


class TestIngestDcatJson:
    def test_single_object(self):
        data = b'[{"title":"t","resources":[{"url":"http://x/d.zip"}]}]'
        records, report = ingest_dcat_json(data, "datahub")
        assert len(records) == 1
        assert records[0].access_urls == ["http://x/d.zip"]
        assert report.records_emitted == 1

    def test_empty_array(self):
        records, report = ingest_dcat_json(b"[]", "datahub")
        assert records == []
        assert report.records_read == 0

    def test_fixture_missing_titles(self):
        data = (FIXTURES / "datahub.json").read_bytes()
        records, report = ingest_dcat_json(data, "datahub")
        assert len(records) == 8
        assert len(report.failures) == 2
        assert report.check_conservation()

    def test_tags_land_in_subject(self):
        data = (FIXTURES / "datahub.json").read_bytes()
        records, _ = ingest_dcat_json(data, "datahub")
        assert "language-resource" in records[0].subjects

    def test_json_syntax_error_aborts(self):
        with pytest.raises(ValueError):
            ingest_dcat_json(b"{not json", "datahub")


class TestRepairTerm:
    def test_clean_iri_passthrough(self):
        term, repair = repair_term("http://ex/a")
        assert term == Iri("http://ex/a")
        assert repair is None

    def test_whitespace_downgrade(self):
        term, repair = repair_term("isbn 12345")
        assert term == Literal("isbn 12345")
        assert repair == "WhitespaceDowngrade"

    def test_scheme_downgrade(self):
        term, repair = repair_term("oai:repo:1234")
        assert term == Literal("oai:repo:1234")
        assert repair == "SchemeDowngrade"

    def test_relative_resolved_against_base(self):
        term, repair = repair_term("page.html", base="http://source.org/dir/")
        assert term == Iri("http://source.org/dir/page.html")
        assert repair == "RelativeResolved"

    def test_relative_without_base_downgrades(self):
        term, repair = repair_term("page.html")
        assert term == Literal("page.html")
        assert repair == "RelativeDowngrade"

    def test_never_raises_and_iris_valid(self):
        weird = ["", " ", "::::", "http://", "%%%", "a b c", "\x00", "urn:"]
        for raw in weird:
            term, _ = repair_term(raw)
            assert isinstance(term, (Iri, Literal))

    def test_dirty_fixture_exactly_13_repairs(self):
        lines = (FIXTURES / "dirty_values.txt").read_text("utf-8").splitlines()
        values = [line for line in lines if not line.startswith("#")]
        assert len(values) == 100
        repairs = [repair_term(v)[1] for v in values]
        assert sum(1 for r in repairs if r is not None) == 13


class TestIngestReport:
    def test_merge_associative(self):
        def mk(read, emitted, failures):
            report = IngestReport(records_read=read, records_emitted=emitted)
            for i in range(failures):
                report.add_failure(f"loc{i}", "x")
            return report

        a, b, c = mk(3, 2, 1), mk(5, 5, 0), mk(1, 0, 1)
        left = mk(0, 0, 0)
        left.merge(a)
        left.merge(b)
        left.merge(c)
        bc = mk(0, 0, 0)
        bc.merge(b)
        bc.merge(c)
        right = mk(0, 0, 0)
        right.merge(a)
        right.merge(bc)
        assert left == right

    def test_repair_kind_required(self):
        report = IngestReport()
        with pytest.raises(ValueError):
            report.add_repair("id", "", "detail")
