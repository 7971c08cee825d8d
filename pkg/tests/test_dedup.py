import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcat.dedup import (
    DuplicateCluster,
    InvalidUrl,
    PairNotClustered,
    PrecisionSampleRow,
    STRATEGY_BOTH,
    STRATEGY_TITLE,
    STRATEGY_URL,
    ClusterScope,
    cluster_report,
    evaluate_precision,
    find_duplicates,
    load_precision_sample,
    merge_all,
    merge_cluster,
    normalize_title,
    normalize_url,
)
from lrcat.records import CatalogRecord, LanguageRef, RightsRef


def make_record(rid, repo, title=None, url=None, **kwargs):
    return CatalogRecord(
        id=rid,
        source_repo=repo,
        titles=[(title, None)] if title else [],
        access_urls=[url] if url else [],
        **kwargs,
    )


class TestNormalizeTitle:
    def test_punctuation_and_whitespace(self):
        assert normalize_title("The  Corpus, v2!") == "the corpus v2"

    def test_empty(self):
        assert normalize_title("") == ""

    def test_udhr_parenthesized_qualifier(self):
        a = normalize_title("Universal Declaration of Human Rights (Spanish)")
        b = normalize_title("universal declaration of human rights spanish")
        assert a == b

    def test_idempotent(self):
        for raw in ["The  Corpus, v2!", "a-b c", "(x) [y] {z}", "ünïcödé!"]:
            once = normalize_title(raw)
            assert normalize_title(once) == once


class TestNormalizeUrl:
    def test_case_port_slash(self):
        assert normalize_url("HTTP://Ex.org:80/a/") == "http://ex.org/a"

    def test_fragment_dropped(self):
        assert normalize_url("http://ex.org/a#frag") == "http://ex.org/a"

    def test_query_preserved(self):
        assert normalize_url("http://ex.org/a?b=1&c=2") == "http://ex.org/a?b=1&c=2"

    def test_non_default_port_kept(self):
        assert normalize_url("http://ex.org:8080/a") == "http://ex.org:8080/a"

    def test_invalid(self):
        with pytest.raises(InvalidUrl):
            normalize_url("notaurl")

    def test_idempotent(self):
        for raw in ["HTTP://Ex.org:80/a/", "https://X.org:443/", "http://e.org/p?q=1#f"]:
            once = normalize_url(raw)
            assert normalize_url(once) == once


class TestFindDuplicates:
    def test_title_pair(self):
        records = [
            make_record("http://p/r/a/1", "clarin", title="Shared Title", url="http://x/1"),
            make_record("http://p/r/a/2", "clarin", title="shared title!", url="http://x/2"),
            make_record("http://p/r/a/3", "clarin", title="Different", url="http://x/3"),
        ]
        clusters = find_duplicates(records, STRATEGY_TITLE)
        assert len(clusters) == 1
        assert clusters[0].member_ids == ("http://p/r/a/1", "http://p/r/a/2")
        assert clusters[0].scope.is_intra

    def test_both_requires_url_too(self):
        records = [
            make_record("http://p/r/a/1", "clarin", title="Shared Title", url="http://x/1"),
            make_record("http://p/r/a/2", "clarin", title="shared title", url="http://x/2"),
            make_record("http://p/r/a/3", "clarin", title="Different", url="http://x/3"),
        ]
        assert find_duplicates(records, STRATEGY_BOTH) == []

    def test_transitive_closure(self):
        records = [
            make_record("http://p/r/a/1", "clarin", title="A"),
            make_record("http://p/r/a/2", "clarin", title="A"),
            make_record("http://p/r/a/3", "clarin", title="B"),
        ]
        records[1].titles.append(("B", None))
        clusters = find_duplicates(records, STRATEGY_TITLE)
        assert len(clusters) == 1
        assert len(clusters[0].member_ids) == 3

    def test_empty_keys_never_match(self):
        records = [
            make_record("http://p/r/a/1", "clarin", title="!!!"),
            make_record("http://p/r/a/2", "clarin", title="..."),
            make_record("http://p/r/a/3", "clarin"),
            make_record("http://p/r/a/4", "clarin"),
        ]
        assert find_duplicates(records, STRATEGY_TITLE) == []

    def test_inter_repo_scope(self):
        records = [
            make_record("http://p/r/a/1", "clarin", title="Same"),
            make_record("http://p/r/b/2", "metashare", title="Same"),
        ]
        (cluster,) = find_duplicates(records, STRATEGY_TITLE)
        assert not cluster.scope.is_intra
        assert cluster.scope.repos == ("clarin", "metashare")


def seeded_fixture():
    """200 records: 15 planted intra-repo and 10 planted inter-repo
    duplicate pairs (sharing both title and URL), everything else unique."""
    rng = random.Random(2024)
    repos = ["clarin", "metashare", "lremap", "datahub"]
    records = []
    for i in range(150):
        repo = repos[i % 4]
        records.append(
            make_record(
                f"http://p/resource/{repo}/u{i:03d}",
                repo,
                title=f"Unique resource {i:03d}",
                url=f"http://data.example.org/u{i:03d}",
            )
        )
    planted = []
    for i in range(15):
        repo = repos[i % 4]
        a = make_record(f"http://p/resource/{repo}/ia{i:02d}", repo,
                        title=f"Planted intra {i:02d}", url=f"http://dup.example.org/i{i:02d}")
        b = make_record(f"http://p/resource/{repo}/ib{i:02d}", repo,
                        title=f"planted INTRA {i:02d}!", url=f"HTTP://dup.example.org/i{i:02d}/")
        records.extend([a, b])
        planted.append((a.id, b.id, "intra"))
    for i in range(10):
        repo_a, repo_b = rng.sample(repos, 2)
        a = make_record(f"http://p/resource/{repo_a}/xa{i:02d}", repo_a,
                        title=f"Planted inter {i:02d}", url=f"http://dup.example.org/x{i:02d}")
        b = make_record(f"http://p/resource/{repo_b}/xb{i:02d}", repo_b,
                        title=f"Planted inter {i:02d}", url=f"http://dup.example.org/x{i:02d}")
        records.extend([a, b])
        planted.append((a.id, b.id, "inter"))
    assert len(records) == 200
    return records, planted


class TestSeededFixture:
    def test_exact_recovery(self):
        records, planted = seeded_fixture()
        for strategy in (STRATEGY_TITLE, STRATEGY_URL, STRATEGY_BOTH):
            clusters = find_duplicates(records, strategy)
            got = {cluster.member_ids for cluster in clusters}
            want = {tuple(sorted((a, b))) for a, b, _ in planted}
            assert got == want, strategy

    def test_scope_partition(self):
        records, planted = seeded_fixture()
        clusters = find_duplicates(records, STRATEGY_BOTH)
        intra = [c for c in clusters if c.scope.is_intra]
        inter = [c for c in clusters if not c.scope.is_intra]
        assert len(intra) == 15
        assert len(inter) == 10

    def test_both_refines_title_and_url(self):
        records, _ = seeded_fixture()
        both = find_duplicates(records, STRATEGY_BOTH)
        for single in (STRATEGY_TITLE, STRATEGY_URL):
            singles = find_duplicates(records, single)
            for cluster in both:
                members = set(cluster.member_ids)
                assert any(members <= set(c.member_ids) for c in singles), (single, cluster)


class TestMergeCluster:
    def test_udhr_language_union(self):
        a = make_record("http://p/r/clarin/1", "clarin", title="UDHR",
                        languages=[LanguageRef("English", "eng", 1.0)])
        b = make_record("http://p/r/clarin/2", "clarin", title="UDHR",
                        languages=[LanguageRef("Spanish", "spa", 1.0)])
        (cluster,) = find_duplicates([a, b], STRATEGY_TITLE)
        merged = merge_cluster(cluster, {r.id: r for r in [a, b]})
        assert {ref.iso639_3 for ref in merged.languages} == {"eng", "spa"}
        assert merged.id == "http://p/r/clarin/1"
        assert "http://p/r/clarin/2" in merged.see_also

    def test_identical_members(self):
        a = make_record("http://p/r/clarin/1", "clarin", title="Same", url="http://x/1")
        b = make_record("http://p/r/clarin/2", "clarin", title="Same", url="http://x/1")
        (cluster,) = find_duplicates([a, b], STRATEGY_BOTH)
        merged = merge_cluster(cluster, {r.id: r for r in [a, b]})
        assert merged.titles == a.titles
        assert merged.access_urls == a.access_urls

    def test_longest_title_wins(self):
        a = make_record("http://p/r/clarin/1", "clarin", title="short")
        b = make_record("http://p/r/clarin/2", "clarin", title="short")
        b.titles = [("much longer title", None), ("short", None)]
        (cluster,) = find_duplicates([a, b], STRATEGY_TITLE)
        merged = merge_cluster(cluster, {r.id: r for r in [a, b]})
        assert merged.titles == [("much longer title", None)]

    def test_merge_all_passthrough(self):
        records, _ = seeded_fixture()
        clusters = find_duplicates(records, STRATEGY_BOTH)
        merged = merge_all(records, clusters)
        assert len(merged) == 200 - 25
        assert len({r.id for r in merged}) == len(merged)


class TestEvaluatePrecision:
    def _clusters_for(self, pairs):
        return [
            DuplicateCluster(tuple(sorted(p)), STRATEGY_TITLE, ClusterScope(("clarin",)))
            for p in pairs
        ]

    def test_table_counts(self):
        pairs = [(f"http://a/{i}", f"http://b/{i}") for i in range(100)]
        clusters = self._clusters_for(pairs)
        verdicts = ["Correct"] * 86 + ["Unclear"] * 6 + ["Incorrect"] * 8
        sample = [PrecisionSampleRow(a, b, v) for (a, b), v in zip(pairs, verdicts)]
        report = evaluate_precision(sample, clusters)
        assert (report.correct, report.unclear, report.incorrect) == (86, 6, 8)
        assert report.precision == pytest.approx(86 / 94)

    def test_all_correct(self):
        pairs = [("http://a/1", "http://b/1")]
        sample = [PrecisionSampleRow("http://a/1", "http://b/1", "Correct")]
        assert evaluate_precision(sample, self._clusters_for(pairs)).precision == 1.0

    def test_unclear_excluded(self):
        pairs = [(f"http://a/{i}", f"http://b/{i}") for i in range(100)]
        verdicts = ["Correct"] * 99 + ["Unclear"]
        sample = [PrecisionSampleRow(a, b, v) for (a, b), v in zip(pairs, verdicts)]
        assert evaluate_precision(sample, self._clusters_for(pairs)).precision == 1.0

    def test_pair_not_clustered(self):
        sample = [PrecisionSampleRow("http://a/1", "http://b/1", "Correct")]
        with pytest.raises(PairNotClustered):
            evaluate_precision(sample, [])

    def test_sample_file_round_trip(self):
        text = "# sample\nhttp://a/1\thttp://b/1\tCorrect\nhttp://a/2\thttp://b/2\tUnclear\n"
        rows = load_precision_sample(text)
        assert rows == [
            PrecisionSampleRow("http://a/1", "http://b/1", "Correct"),
            PrecisionSampleRow("http://a/2", "http://b/2", "Unclear"),
        ]


class TestPrecisionOrdering:
    def test_strategy_ordering_on_noisy_fixture(self):
        """Noise pairs share titles more often than URLs, so precision
        (Both) >= (UrlOnly) >= (TitleOnly)."""
        records, planted = seeded_fixture()
        truth = {tuple(sorted((a, b))) for a, b, _ in planted}
        # noise: coincidental shared titles (false matches), fewer shared urls
        for i in range(12):
            records.append(make_record(f"http://p/resource/clarin/nt{i:02d}", "clarin",
                                        title=f"Common name {i % 6}", url=f"http://noise.example.org/t{i:02d}"))
        for i in range(4):
            records.append(make_record(f"http://p/resource/clarin/nu{i:02d}", "clarin",
                                        title=f"Unrelated {i:02d}", url=f"http://noise.example.org/shared{i % 2}"))

        precisions = {}
        for strategy in (STRATEGY_TITLE, STRATEGY_URL, STRATEGY_BOTH):
            clusters = find_duplicates(records, strategy)
            sample = []
            for cluster in clusters:
                ids = cluster.member_ids
                for i, a in enumerate(ids):
                    for b in ids[i + 1 :]:
                        verdict = "Correct" if tuple(sorted((a, b))) in truth else "Incorrect"
                        sample.append(PrecisionSampleRow(a, b, verdict))
            precisions[strategy] = evaluate_precision(sample, clusters).precision
        assert precisions[STRATEGY_BOTH] >= precisions[STRATEGY_URL] >= precisions[STRATEGY_TITLE]
        assert precisions[STRATEGY_TITLE] < 1.0


class TestClusterReport:
    def test_report_lines(self):
        records, _ = seeded_fixture()
        clusters = find_duplicates(records, STRATEGY_BOTH)
        text = cluster_report(clusters)
        lines = text.strip().splitlines()
        assert len([l for l in lines if not l.startswith("#")]) == 25
        assert "# duplicate-pairs\t25" in text
        assert "# extra-copies\t25" in text
        assert "# clusters\t25" in text


@settings(max_examples=120, deadline=None)
@given(st.text(max_size=30))
def test_normalize_title_idempotent_property(raw):
    once = normalize_title(raw)
    assert normalize_title(once) == once
