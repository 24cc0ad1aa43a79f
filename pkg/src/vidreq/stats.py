"""Corpus content statistics and relevant/irrelevant split tables.

Per-second figures are the mean of per-video ratios (not the ratio of group
means), which is robust to duration skew; unique-word counts are per video,
then averaged. The word definition is the shared tokenizer's.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DanglingBundle
from .model import TextBundle, VideoRecord
from .relevance import Label, LabeledExample, RelevanceVerdict
from .textutil import tokenize

TOTAL_KEY = "Total"


@dataclass(frozen=True)
class ContentStats:
    platform: str
    category: str  # a category name, or "Total" for the per-platform rollup
    video_count: int
    avg_duration_s: float
    avg_views: float
    audio_words_per_video: float
    unique_audio_words_per_video: float
    audio_words_per_s: float
    unique_audio_words_per_s: float
    visual_words_per_video: float
    unique_visual_words_per_video: float
    visual_words_per_s: float
    unique_visual_words_per_s: float

    def to_dict(self) -> dict:
        return {
            "platform": self.platform,
            "category": self.category,
            "video_count": self.video_count,
            "avg_duration_s": self.avg_duration_s,
            "avg_views": self.avg_views,
            "audio_words_per_video": self.audio_words_per_video,
            "unique_audio_words_per_video": self.unique_audio_words_per_video,
            "audio_words_per_s": self.audio_words_per_s,
            "unique_audio_words_per_s": self.unique_audio_words_per_s,
            "visual_words_per_video": self.visual_words_per_video,
            "unique_visual_words_per_video": self.unique_visual_words_per_video,
            "visual_words_per_s": self.visual_words_per_s,
            "unique_visual_words_per_s": self.unique_visual_words_per_s,
        }


@dataclass(frozen=True)
class _VideoFigures:
    duration_s: float
    views: int
    audio_words: int
    unique_audio_words: int
    visual_words: int
    unique_visual_words: int


def _figures(record: VideoRecord, bundle: TextBundle | None) -> _VideoFigures:
    audio_tokens = tokenize(bundle.audio_text) if bundle else []
    visual_tokens = (
        tokenize(" ".join(line.text for line in bundle.visual_lines)) if bundle else []
    )
    return _VideoFigures(
        duration_s=record.duration_s,
        views=record.view_count,
        audio_words=len(audio_tokens),
        unique_audio_words=len(set(audio_tokens)),
        visual_words=len(visual_tokens),
        unique_visual_words=len(set(visual_tokens)),
    )


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _aggregate(platform: str, category: str, figures: Sequence[_VideoFigures]) -> ContentStats:
    return ContentStats(
        platform=platform,
        category=category,
        video_count=len(figures),
        avg_duration_s=_mean([f.duration_s for f in figures]),
        avg_views=_mean([f.views for f in figures]),
        audio_words_per_video=_mean([f.audio_words for f in figures]),
        unique_audio_words_per_video=_mean([f.unique_audio_words for f in figures]),
        audio_words_per_s=_mean([f.audio_words / f.duration_s for f in figures]),
        unique_audio_words_per_s=_mean(
            [f.unique_audio_words / f.duration_s for f in figures]
        ),
        visual_words_per_video=_mean([f.visual_words for f in figures]),
        unique_visual_words_per_video=_mean([f.unique_visual_words for f in figures]),
        visual_words_per_s=_mean([f.visual_words / f.duration_s for f in figures]),
        unique_visual_words_per_s=_mean(
            [f.unique_visual_words / f.duration_s for f in figures]
        ),
    )


def content_statistics(
    records: Sequence[VideoRecord], bundles: Mapping[str, TextBundle]
) -> list[ContentStats]:
    """One row per (platform, category) group plus a per-platform total.

    Records without a bundle contribute zero word counts. A bundle whose
    record is missing is an input error.
    """
    known = {r.id for r in records}
    dangling = sorted(set(bundles) - known)
    if dangling:
        raise DanglingBundle(f"bundles without records: {dangling}")
    groups: dict[tuple[str, str], list[_VideoFigures]] = {}
    platform_all: dict[str, list[_VideoFigures]] = {}
    for record in records:
        fig = _figures(record, bundles.get(record.id))
        key = (record.platform.value, record.category.value)
        groups.setdefault(key, []).append(fig)
        platform_all.setdefault(record.platform.value, []).append(fig)
    out = []
    for platform in sorted(platform_all):
        for (plat, category) in sorted(k for k in groups if k[0] == platform):
            out.append(_aggregate(plat, category, groups[(plat, category)]))
        out.append(_aggregate(platform, TOTAL_KEY, platform_all[platform]))
    return out


def render_stats_markdown(stats: Sequence[ContentStats]) -> str:
    header = (
        "| Platform | Category | Videos | Avg. Sec. | Views/Video | "
        "Audio W/Video | Uniq. Audio W/Video | Audio W/Sec | Uniq. Audio W/Sec | "
        "Visual W/Video | Uniq. Visual W/Video | Visual W/Sec | Uniq. Visual W/Sec |"
    )
    rule = "|" + "---|" * 13
    lines = [header, rule]
    for s in stats:
        lines.append(
            f"| {s.platform} | {s.category} | {s.video_count} | {s.avg_duration_s:.1f} | "
            f"{s.avg_views:.1f} | {s.audio_words_per_video:.1f} | "
            f"{s.unique_audio_words_per_video:.1f} | {s.audio_words_per_s:.2f} | "
            f"{s.unique_audio_words_per_s:.2f} | {s.visual_words_per_video:.1f} | "
            f"{s.unique_visual_words_per_video:.1f} | {s.visual_words_per_s:.2f} | "
            f"{s.unique_visual_words_per_s:.2f} |"
        )
    return "\n".join(lines) + "\n"


def relevance_split_report(
    verdicts: Sequence[RelevanceVerdict],
    labels: Sequence[LabeledExample],
    records: Mapping[str, VideoRecord],
) -> dict:
    """Relevant/irrelevant counts per platform and in total, with manual
    labels and model verdicts reported separately."""

    def empty() -> dict:
        return {Label.RELEVANT.value: 0, Label.IRRELEVANT.value: 0}

    def bump(table: dict, platform: str, label: Label) -> None:
        table.setdefault(platform, empty())[label.value] += 1
        table.setdefault(TOTAL_KEY, empty())[label.value] += 1

    manual: dict[str, dict] = {}
    model: dict[str, dict] = {}
    for example in labels:
        record = records.get(example.record_id)
        platform = record.platform.value if record else "Unknown"
        bump(manual, platform, example.label)
    for verdict in verdicts:
        record = records.get(verdict.record_id)
        platform = record.platform.value if record else "Unknown"
        bump(model, platform, verdict.label)
    combined = empty()
    for table in (manual, model):
        totals = table.get(TOTAL_KEY, empty())
        for key in combined:
            combined[key] += totals[key]
    return {"manual": manual, "model": model, "combined_total": combined}
