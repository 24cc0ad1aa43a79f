"""Per-record text extraction: ASR transcript, OCR over candidate frames,
size-based region filtering, spell correction, and bundle assembly.

ASR and OCR are external executables behind a narrow contract (JSON on
stdout); deterministic stubs live in vidreq.adapters. OCR runs in one of
two modes: when a record has no usable audio text the full frame is
captured, otherwise visual text only supplements the audio and small
regions are dropped more aggressively.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .errors import BackendUnavailable, MediaUnreadable, RecordMismatch
from .model import Segment, TextBundle, VideoRecord, VisualLine
from .sampling import CandidateFrame, read_pgm
from .spelling import FrequencyLexicon, correct_text

TRANSCRIPTION_CAP_S = 1800.0  # only the first thirty minutes are transcribed
FULL_FRAME_MIN_HEIGHT_RATIO = 0.02
SUPPLEMENT_MIN_HEIGHT_RATIO = 0.06
DEDUPE_WINDOW_S = 5.0


class OcrMode(str, Enum):
    FULL_FRAME = "FullFrame"
    LARGE_TEXT_SUPPLEMENT = "LargeTextSupplement"


@dataclass(frozen=True)
class TextRegion:
    frame_index: int
    x: int
    y: int
    w: int
    h: int
    raw_text: str
    corrected_text: str = ""


@dataclass(frozen=True)
class Transcript:
    record_id: str
    text: str
    segments: tuple[Segment, ...]
    language: str | None


@dataclass(frozen=True)
class VisualText:
    record_id: str
    lines: tuple[VisualLine, ...]


class ExecutableAsr:
    """ASR adapter contract: `cmd <media_path> <max_seconds>` writing JSON
    {language, segments:[{start,end,text}]} to stdout; nonzero exit means
    the backend is unavailable."""

    def __init__(self, command: Sequence[str]):
        self.command = list(command)

    def transcribe(self, media_path: str, max_seconds: float) -> dict:
        try:
            proc = subprocess.run(
                [*self.command, str(media_path), str(max_seconds)],
                capture_output=True,
                timeout=600,
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise BackendUnavailable(f"ASR adapter failed to run: {exc}") from exc
        if proc.returncode != 0:
            raise BackendUnavailable(
                f"ASR adapter exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
            )
        try:
            return json.loads(proc.stdout.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise BackendUnavailable(f"ASR adapter wrote invalid JSON: {exc}") from exc


class ExecutableOcr:
    """OCR adapter contract: `cmd <frame_path>` writing JSON
    {regions:[{x,y,w,h,text}]} to stdout."""

    def __init__(self, command: Sequence[str]):
        self.command = list(command)

    def detect(self, frame_path: str) -> dict:
        try:
            proc = subprocess.run(
                [*self.command, str(frame_path)], capture_output=True, timeout=600
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise BackendUnavailable(f"OCR adapter failed to run: {exc}") from exc
        if proc.returncode != 0:
            raise BackendUnavailable(
                f"OCR adapter exited {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}"
            )
        try:
            return json.loads(proc.stdout.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise BackendUnavailable(f"OCR adapter wrote invalid JSON: {exc}") from exc


def _normalize_segments(raw_segments: list[dict]) -> tuple[Segment, ...]:
    """Sort, cap at the transcription limit, and remove overlaps."""
    rows = sorted(
        (float(s["start"]), float(s["end"]), str(s.get("text", ""))) for s in raw_segments
    )
    out: list[Segment] = []
    cursor = 0.0
    for start, end, text in rows:
        start = max(start, cursor)
        end = min(end, TRANSCRIPTION_CAP_S)
        if start >= TRANSCRIPTION_CAP_S or end <= start:
            continue
        out.append(Segment(start_s=start, end_s=end, text=text))
        cursor = end
    return tuple(out)


def transcribe(record: VideoRecord, asr: ExecutableAsr) -> Transcript | None:
    """Transcript of the record's media, or None when there is no usable
    audio (no track, or the backend found zero speech segments)."""
    if record.media_path is None:
        return None
    if not Path(record.media_path).is_file():
        raise MediaUnreadable(f"record {record.id!r}: media not readable: {record.media_path}")
    result = asr.transcribe(record.media_path, TRANSCRIPTION_CAP_S)
    segments = _normalize_segments(result.get("segments", []))
    if not segments:
        return None
    text = " ".join(s.text.strip() for s in segments if s.text.strip())
    return Transcript(
        record_id=record.id,
        text=text,
        segments=segments,
        language=result.get("language"),
    )


def route_ocr(has_audio_text: bool) -> OcrMode:
    """No audio: capture all frame text. Audio present: visual text only
    supplements it, so keep just the prominent regions."""
    return OcrMode.LARGE_TEXT_SUPPLEMENT if has_audio_text else OcrMode.FULL_FRAME


def min_height_ratio(mode: OcrMode) -> float:
    if mode is OcrMode.FULL_FRAME:
        return FULL_FRAME_MIN_HEIGHT_RATIO
    return SUPPLEMENT_MIN_HEIGHT_RATIO


def filter_regions(
    regions: list[TextRegion],
    frame_h: int,
    mode: OcrMode,
    full_ratio: float = FULL_FRAME_MIN_HEIGHT_RATIO,
    supplement_ratio: float = SUPPLEMENT_MIN_HEIGHT_RATIO,
) -> list[TextRegion]:
    """Keep regions of sufficient height for the OCR mode, preserving order."""
    if frame_h <= 0:
        raise ValueError("frame_h must be > 0")
    ratio = full_ratio if mode is OcrMode.FULL_FRAME else supplement_ratio
    threshold = ratio * frame_h
    return [r for r in regions if r.h >= threshold]


def parse_regions(raw: dict, frame_index: int) -> list[TextRegion]:
    regions = []
    for entry in raw.get("regions", []):
        w = int(entry.get("w", 0))
        h = int(entry.get("h", 0))
        if w <= 0 or h <= 0:
            continue
        regions.append(
            TextRegion(
                frame_index=frame_index,
                x=int(entry.get("x", 0)),
                y=int(entry.get("y", 0)),
                w=w,
                h=h,
                raw_text=str(entry.get("text", "")),
            )
        )
    return regions


def dedupe_visual(
    lines: list[VisualLine], window_s: float = DEDUPE_WINDOW_S
) -> list[VisualLine]:
    """Drop a line when the same text (case-folded) occurred within the
    trailing window; subtitles persist across consecutive candidate frames."""
    out: list[VisualLine] = []
    last_seen: dict[str, float] = {}
    for line in lines:
        key = line.text.casefold()
        previous = last_seen.get(key)
        if previous is None or line.ts_s - previous > window_s:
            out.append(line)
        last_seen[key] = line.ts_s
    return out


def assemble_bundle(
    record: VideoRecord,
    transcript: Transcript | None,
    visual: VisualText | None,
    assembled_at: str,
) -> TextBundle:
    """Build the record's TextBundle, establishing all bundle invariants."""
    if transcript is not None and transcript.record_id != record.id:
        raise RecordMismatch(
            f"transcript belongs to {transcript.record_id!r}, not {record.id!r}"
        )
    if visual is not None and visual.record_id != record.id:
        raise RecordMismatch(f"visual text belongs to {visual.record_id!r}, not {record.id!r}")
    lines = tuple(visual.lines) if visual is not None else ()
    for line in lines:
        if line.ts_s > record.duration_s + 1e-6:
            raise ValueError(
                f"record {record.id!r}: visual line at {line.ts_s}s exceeds duration "
                f"{record.duration_s}s"
            )
    audio_text = transcript.text if transcript is not None else ""
    return TextBundle(
        record_id=record.id,
        audio_text=audio_text,
        audio_segments=tuple(transcript.segments) if transcript is not None else (),
        visual_lines=lines,
        has_audio_text=bool(audio_text),
        assembled_at=assembled_at,
        audio_language=transcript.language if transcript is not None else None,
    )


def extract_visual_text(
    record: VideoRecord,
    candidates: list[CandidateFrame],
    frames_dir,
    ocr: ExecutableOcr,
    lexicon: FrequencyLexicon,
    has_audio_text: bool,
    full_ratio: float = FULL_FRAME_MIN_HEIGHT_RATIO,
    supplement_ratio: float = SUPPLEMENT_MIN_HEIGHT_RATIO,
    window_s: float = DEDUPE_WINDOW_S,
) -> VisualText:
    """OCR every candidate frame, gate by region size, spell-correct, dedupe."""
    frames_dir = Path(frames_dir)
    mode = route_ocr(has_audio_text)
    lines: list[VisualLine] = []
    for candidate in candidates:
        frame_path = frames_dir / f"{candidate.frame_index:06d}.pgm"
        if not frame_path.is_file():
            continue
        frame_h = read_pgm(frame_path).shape[0]
        regions = parse_regions(ocr.detect(str(frame_path)), candidate.frame_index)
        kept = filter_regions(regions, frame_h, mode, full_ratio, supplement_ratio)
        for region in kept:
            corrected = correct_text(region.raw_text, lexicon)
            if corrected.strip():
                lines.append(VisualLine(ts_s=candidate.timestamp_s, text=corrected))
    lines.sort(key=lambda l: l.ts_s)
    return VisualText(record_id=record.id, lines=tuple(dedupe_visual(lines, window_s)))
