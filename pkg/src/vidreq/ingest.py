"""Two-level corpus filtration: drop official-account videos, then keep
English-language records only.

Language detection prefers the ASR-detected tag when a text bundle exists
(audio is the richer signal); otherwise a deterministic stopword-ratio
heuristic runs over the description text. A pluggable external detector can
replace the heuristic: any executable that reads UTF-8 text on stdin and
prints a BCP-47 tag.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass
from typing import Callable, Mapping

from .model import CorpusManifest, TextBundle, VideoRecord
from .textutil import english_stopwords, tokenize

# D-IF-1: a record counts as English when at least 25% of its word tokens
# are in the bundled stopword list; below 3 tokens the language is "und".
STOPWORD_RATIO_THRESHOLD = 0.25
MIN_TOKENS = 3


@dataclass(frozen=True)
class FilterReport:
    input_count: int
    dropped_official: tuple[str, ...]
    dropped_language: tuple[tuple[str, str], ...]
    retained: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "input_count": self.input_count,
            "dropped_official": list(self.dropped_official),
            "dropped_language": [list(pair) for pair in self.dropped_language],
            "retained": list(self.retained),
        }


def filter_official(
    records: list[VideoRecord],
) -> tuple[list[VideoRecord], list[VideoRecord]]:
    """Split records into (kept, dropped) on the official-account flag."""
    kept = [r for r in records if not r.is_official_account]
    dropped = [r for r in records if r.is_official_account]
    return kept, dropped


def detect_language(text: str, transcript_language: str | None = None) -> str:
    """BCP-47 tag for `text`, or "und" when it cannot be determined.

    An ASR-detected `transcript_language` always wins. The fallback
    heuristic only distinguishes English from everything else, which is all
    the pipeline needs.
    """
    if transcript_language:
        return transcript_language.strip().lower()
    tokens = tokenize(text)
    if len(tokens) < MIN_TOKENS:
        return "und"
    stopwords = english_stopwords()
    ratio = sum(1 for t in tokens if t in stopwords) / len(tokens)
    return "en" if ratio >= STOPWORD_RATIO_THRESHOLD else "und"


def external_detector(command: list[str]) -> Callable[[str, str | None], str]:
    """Wrap an executable language detector in the detect_language signature."""

    def detect(text: str, transcript_language: str | None = None) -> str:
        if transcript_language:
            return transcript_language.strip().lower()
        proc = subprocess.run(
            command, input=text.encode("utf-8"), capture_output=True, check=True
        )
        tag = proc.stdout.decode("utf-8").strip().lower()
        return tag or "und"

    return detect


def is_english(tag: str) -> bool:
    return tag == "en" or tag.startswith("en-")


def apply_filters(
    manifest: CorpusManifest,
    bundles: Mapping[str, TextBundle | None] | None = None,
    detector: Callable[[str, str | None], str] = detect_language,
) -> FilterReport:
    """Run both filtration levels over the manifest, in manifest order."""
    bundles = bundles or {}
    dropped_official: list[str] = []
    dropped_language: list[tuple[str, str]] = []
    retained: list[str] = []
    for record in manifest.records:
        if record.is_official_account:
            dropped_official.append(record.id)
            continue
        bundle = bundles.get(record.id)
        transcript_language = bundle.audio_language if bundle is not None else None
        tag = detector(record.description, transcript_language)
        if is_english(tag):
            retained.append(record.id)
        else:
            dropped_language.append((record.id, tag))
    return FilterReport(
        input_count=len(manifest.records),
        dropped_official=tuple(dropped_official),
        dropped_language=tuple(dropped_language),
        retained=tuple(retained),
    )


def dump_report(report: FilterReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
