import pytest

from vidreq.errors import DanglingBundle
from vidreq.model import Category, Platform
from vidreq.relevance import Label, LabeledExample, RelevanceVerdict
from vidreq.stats import content_statistics, relevance_split_report, render_stats_markdown

from conftest import make_bundle, make_record


def words(n_total, n_unique):
    unique = [f"w{i}" for i in range(n_unique)]
    repeats = [unique[i % n_unique] for i in range(n_total - n_unique)]
    return " ".join(unique + repeats)


def test_single_video_arithmetic():
    record = make_record("a", duration_s=60.0, view_count=500)
    bundle = make_bundle("a", audio=words(120, 80))
    rows = content_statistics([record], {"a": bundle})
    group = rows[0]
    assert group.audio_words_per_video == 120
    assert group.unique_audio_words_per_video == 80
    assert group.audio_words_per_s == pytest.approx(2.0)
    assert group.unique_audio_words_per_s == pytest.approx(80 / 60, abs=1e-9)
    assert group.avg_views == 500
    assert group.avg_duration_s == 60.0


def test_empty_transcript_zero_audio_visual_unaffected():
    record = make_record("a", duration_s=10.0)
    bundle = make_bundle("a", lines=[(1.0, "hello world"), (2.0, "more text here")])
    rows = content_statistics([record], {"a": bundle})
    group = rows[0]
    assert group.audio_words_per_video == 0
    assert group.audio_words_per_s == 0
    assert group.visual_words_per_video == 5
    assert group.unique_visual_words_per_video == 5


def test_two_video_group_is_mean_of_per_video():
    records = [
        make_record("a", duration_s=10.0, view_count=100),
        make_record("b", duration_s=20.0, view_count=300),
    ]
    bundles = {
        "a": make_bundle("a", audio=words(10, 10)),
        "b": make_bundle("b", audio=words(30, 15)),
    }
    rows = content_statistics(records, bundles)
    group = rows[0]
    assert group.video_count == 2
    assert group.avg_duration_s == 15.0
    assert group.avg_views == 200.0
    assert group.audio_words_per_video == 20.0
    assert group.unique_audio_words_per_video == 12.5
    # mean of per-video ratios, not ratio of means
    assert group.audio_words_per_s == pytest.approx((10 / 10 + 30 / 20) / 2, abs=1e-12)


def test_groups_and_platform_totals():
    records = [
        make_record("a", platform=Platform.TIKTOK, category=Category.SOFTWARE),
        make_record("b", platform=Platform.TIKTOK, category=Category.PHONE),
        make_record("c", platform=Platform.YOUTUBE, category=Category.SOFTWARE),
    ]
    rows = content_statistics(records, {})
    keys = [(r.platform, r.category) for r in rows]
    assert ("TikTok", "Total") in keys
    assert ("YouTube", "Total") in keys
    tiktok_total = next(r for r in rows if r.platform == "TikTok" and r.category == "Total")
    assert tiktok_total.video_count == 2


def test_total_additivity():
    records = [
        make_record(f"r{i}", platform=Platform.TIKTOK,
                    category=Category.SOFTWARE if i % 2 else Category.PHONE,
                    duration_s=10.0 * (i + 1), view_count=i * 10)
        for i in range(6)
    ]
    bundles = {r.id: make_bundle(r.id, audio=words(6 + i, 4 + i)) for i, r in enumerate(records)}
    rows = content_statistics(records, bundles)
    groups = [r for r in rows if r.platform == "TikTok" and r.category != "Total"]
    total = next(r for r in rows if r.platform == "TikTok" and r.category == "Total")
    weighted = sum(g.audio_words_per_video * g.video_count for g in groups)
    assert total.audio_words_per_video == pytest.approx(
        weighted / total.video_count, abs=1e-9
    )


def test_permutation_invariance():
    records = [make_record(f"r{i}", duration_s=10.0 + i) for i in range(5)]
    bundles = {r.id: make_bundle(r.id, audio=words(8, 8)) for r in records}
    forward = content_statistics(records, bundles)
    backward = content_statistics(list(reversed(records)), bundles)
    assert forward == backward


def test_dangling_bundle():
    with pytest.raises(DanglingBundle):
        content_statistics([make_record("a")], {"ghost": make_bundle("ghost")})


def test_markdown_rendering():
    rows = content_statistics([make_record("a")], {})
    text = render_stats_markdown(rows)
    assert text.startswith("| Platform | Category |")
    assert "TikTok" in text


def test_relevance_split_counts():
    records = {
        "a": make_record("a", platform=Platform.TIKTOK),
        "b": make_record("b", platform=Platform.TIKTOK),
        "c": make_record("c", platform=Platform.TIKTOK),
        "d": make_record("d", platform=Platform.TIKTOK),
        "e": make_record("e", platform=Platform.TIKTOK),
    }
    verdicts = [
        RelevanceVerdict(rid, Label.RELEVANT, 0.9, "m") for rid in ("a", "b", "c")
    ] + [RelevanceVerdict(rid, Label.IRRELEVANT, 0.1, "m") for rid in ("d", "e")]
    table = relevance_split_report(verdicts, [], records)
    assert table["model"]["TikTok"] == {"Relevant": 3, "Irrelevant": 2}
    assert table["model"]["Total"] == {"Relevant": 3, "Irrelevant": 2}
    assert table["combined_total"] == {"Relevant": 3, "Irrelevant": 2}


def test_relevance_split_empty():
    table = relevance_split_report([], [], {})
    assert table["manual"] == {} and table["model"] == {}
    assert table["combined_total"] == {"Relevant": 0, "Irrelevant": 0}


def test_relevance_split_mixed_provenance_sums():
    records = {
        "a": make_record("a", platform=Platform.TIKTOK),
        "b": make_record("b", platform=Platform.YOUTUBE),
    }
    labels = [LabeledExample("a", "", Label.RELEVANT, "x", "s")]
    verdicts = [RelevanceVerdict("b", Label.IRRELEVANT, 0.2, "m")]
    table = relevance_split_report(verdicts, labels, records)
    manual_total = table["manual"]["Total"]
    model_total = table["model"]["Total"]
    combined = table["combined_total"]
    for key in ("Relevant", "Irrelevant"):
        assert combined[key] == manual_total[key] + model_total[key]
