"""Core domain types and the corpus manifest format.

The manifest is schema-versioned JSON (`corpus.json`). Unknown fields on
records and on the manifest itself survive a parse/serialize round-trip but
are otherwise ignored. All types are immutable after construction and safe
to share across concurrent pipeline stages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping

from .errors import DuplicateId, MalformedManifest, MissingField

SCHEMA_VERSION = 1


class Platform(str, Enum):
    TIKTOK = "TikTok"
    YOUTUBE = "YouTube"


class Category(str, Enum):
    SOFTWARE = "Software"
    PHONE = "Phone"
    COMPUTER = "Computer"
    AUTOMOTIVE = "Automotive"


_REQUIRED_FIELDS = (
    "id",
    "platform",
    "product",
    "category",
    "is_official_account",
    "duration_s",
    "view_count",
)


def _frozen_extra(extra: Mapping[str, Any] | None) -> Mapping[str, Any]:
    return MappingProxyType(dict(extra or {}))


@dataclass(frozen=True)
class VideoRecord:
    """One video's identity, platform metadata, and media reference."""

    id: str
    platform: Platform
    product: str
    category: Category
    title: str
    description: str
    creator_handle: str
    is_official_account: bool
    duration_s: float
    view_count: int
    media_path: str | None = None
    language: str = "und"
    extra: Mapping[str, Any] = field(default_factory=lambda: _frozen_extra(None))


@dataclass(frozen=True)
class CorpusManifest:
    schema_version: int
    records: tuple[VideoRecord, ...]
    search_terms: Mapping[str, str] = field(default_factory=lambda: _frozen_extra(None))
    extra: Mapping[str, Any] = field(default_factory=lambda: _frozen_extra(None))

    def by_id(self) -> dict[str, VideoRecord]:
        return {r.id: r for r in self.records}


@dataclass(frozen=True)
class Segment:
    """One transcribed speech span, in seconds from the start of the media."""

    start_s: float
    end_s: float
    text: str


@dataclass(frozen=True)
class VisualLine:
    """One OCR-extracted line anchored to the frame timestamp it came from."""

    ts_s: float
    text: str


@dataclass(frozen=True)
class TextBundle:
    """The extracted texts of one record.

    `audio_language` carries the ASR-detected language tag (when any) so the
    ingest filter can prefer it over description-based detection.
    """

    record_id: str
    audio_text: str
    audio_segments: tuple[Segment, ...]
    visual_lines: tuple[VisualLine, ...]
    has_audio_text: bool
    assembled_at: str
    audio_language: str | None = None


def validate_record(record: VideoRecord) -> list[str]:
    """Invariant violations as human-readable strings; empty means valid."""
    violations = []
    if not record.id:
        violations.append("id must be non-empty")
    if not record.duration_s > 0:
        violations.append("duration_s must be > 0")
    if record.view_count < 0:
        violations.append("view_count must be ≥ 0")
    return violations


def record_from_dict(raw: dict[str, Any]) -> VideoRecord:
    record_id = raw.get("id", "<missing id>")
    for name in _REQUIRED_FIELDS:
        if name not in raw:
            raise MissingField(f"record {record_id!r}: missing field {name!r}")
    try:
        platform = Platform(raw["platform"])
        category = Category(raw["category"])
    except ValueError as exc:
        raise MalformedManifest(f"record {record_id!r}: {exc}") from exc
    known = {
        "id",
        "platform",
        "product",
        "category",
        "title",
        "description",
        "creator_handle",
        "is_official_account",
        "duration_s",
        "view_count",
        "media_path",
        "language",
    }
    extra = {k: v for k, v in raw.items() if k not in known}
    record = VideoRecord(
        id=str(raw["id"]),
        platform=platform,
        product=str(raw["product"]),
        category=category,
        title=str(raw.get("title", "")),
        description=str(raw.get("description", "")),
        creator_handle=str(raw.get("creator_handle", "")),
        is_official_account=bool(raw["is_official_account"]),
        duration_s=float(raw["duration_s"]),
        view_count=int(raw["view_count"]),
        media_path=raw.get("media_path"),
        language=str(raw.get("language", "und")),
        extra=_frozen_extra(extra),
    )
    violations = validate_record(record)
    if violations:
        raise MalformedManifest(f"record {record.id!r}: " + "; ".join(violations))
    return record


def record_to_dict(record: VideoRecord) -> dict[str, Any]:
    out = {
        "id": record.id,
        "platform": record.platform.value,
        "product": record.product,
        "category": record.category.value,
        "title": record.title,
        "description": record.description,
        "creator_handle": record.creator_handle,
        "is_official_account": record.is_official_account,
        "duration_s": record.duration_s,
        "view_count": record.view_count,
        "media_path": record.media_path,
        "language": record.language,
    }
    out.update(record.extra)
    return out


def parse_manifest(data: bytes | str) -> CorpusManifest:
    """Parse and validate a `corpus.json` payload."""
    try:
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        raw = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedManifest(f"not valid UTF-8 JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedManifest("top-level value must be an object")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise MalformedManifest(
            f"schema_version must be {SCHEMA_VERSION}, got {raw.get('schema_version')!r}"
        )
    raw_records = raw.get("records")
    if not isinstance(raw_records, list):
        raise MissingField("manifest: missing field 'records'")

    records = []
    seen: set[str] = set()
    for entry in raw_records:
        if not isinstance(entry, dict):
            raise MalformedManifest("records must be objects")
        record = record_from_dict(entry)
        if record.id in seen:
            raise DuplicateId(record.id)
        seen.add(record.id)
        records.append(record)

    extra = {k: v for k, v in raw.items() if k not in {"schema_version", "records", "search_terms"}}
    return CorpusManifest(
        schema_version=SCHEMA_VERSION,
        records=tuple(records),
        search_terms=_frozen_extra(raw.get("search_terms", {})),
        extra=_frozen_extra(extra),
    )


def serialize_manifest(manifest: CorpusManifest) -> str:
    out: dict[str, Any] = {
        "schema_version": manifest.schema_version,
        "records": [record_to_dict(r) for r in manifest.records],
        "search_terms": dict(manifest.search_terms),
    }
    out.update(manifest.extra)
    return json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_manifest(path) -> CorpusManifest:
    with open(path, "rb") as fh:
        return parse_manifest(fh.read())


def bundle_to_dict(bundle: TextBundle) -> dict[str, Any]:
    return {
        "record_id": bundle.record_id,
        "audio_text": bundle.audio_text,
        "audio_segments": [
            {"start_s": s.start_s, "end_s": s.end_s, "text": s.text}
            for s in bundle.audio_segments
        ],
        "visual_lines": [{"ts_s": v.ts_s, "text": v.text} for v in bundle.visual_lines],
        "has_audio_text": bundle.has_audio_text,
        "assembled_at": bundle.assembled_at,
        "audio_language": bundle.audio_language,
    }


def bundle_from_dict(raw: dict[str, Any]) -> TextBundle:
    return TextBundle(
        record_id=raw["record_id"],
        audio_text=raw.get("audio_text", ""),
        audio_segments=tuple(
            Segment(float(s["start_s"]), float(s["end_s"]), str(s["text"]))
            for s in raw.get("audio_segments", [])
        ),
        visual_lines=tuple(
            VisualLine(float(v["ts_s"]), str(v["text"])) for v in raw.get("visual_lines", [])
        ),
        has_audio_text=bool(raw.get("has_audio_text", False)),
        assembled_at=str(raw.get("assembled_at", "")),
        audio_language=raw.get("audio_language"),
    )


def load_bundle(path) -> TextBundle:
    with open(path, "r", encoding="utf-8") as fh:
        return bundle_from_dict(json.load(fh))


def dump_bundle(bundle: TextBundle, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle_to_dict(bundle), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
