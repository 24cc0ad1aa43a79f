"""Candidate frame selection from a decoded grayscale frame stream.

A frame becomes an OCR candidate when the motion distribution changes
significantly. Per frame we compute a spectral-residual saliency energy
map, slice it along the center vertical, center horizontal, and main
diagonal lines, and normalize each slice to a probability vector. The
divergence vector s_t holds, per slice, the KL divergence between frame t
and frame t-1. Frame t is selected when the jump s_t - s_{t-1} exceeds the
threshold vector on every slice and the platform's minimum inter-candidate
gap has elapsed. Frame 0 is always selected: the rule is undefined at t=0
and openers/thumbnails tend to carry titles.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyFrame, LengthMismatch, MissingFrames
from .model import Platform

KL_EPS = 1e-12  # floor on both operands before the log ratio
SLICE_EPS = 1e-12  # additive smoothing before L1 normalization
DEFAULT_THRESHOLDS = (1e-4, 1e-4, 1e-4)
DEFAULT_SLICE_LENGTH = 64
DEFAULT_MIN_GAP_S = {Platform.TIKTOK: 1.5, Platform.YOUTUBE: 2.5}


class CandidateReason(str, Enum):
    INITIAL = "Initial"
    DIVERGENCE_JUMP = "DivergenceJump"


@dataclass(frozen=True)
class SliceVector:
    """Per-slice KL divergences (all non-negative for valid distributions)."""

    vertical: float
    horizontal: float
    diagonal: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.vertical, self.horizontal, self.diagonal)


@dataclass(frozen=True)
class CandidateFrame:
    frame_index: int
    timestamp_s: float
    divergence: SliceVector
    reason: CandidateReason


@dataclass(frozen=True)
class FrameStream:
    record_id: str
    fps: float
    frames: tuple[np.ndarray, ...]
    platform_profile: Platform

    def __post_init__(self):
        if self.fps <= 0:
            raise ValueError("fps must be > 0")
        shapes = {f.shape for f in self.frames}
        if len(shapes) > 1:
            raise ValueError(f"frames must share dimensions, got {sorted(shapes)}")

    @property
    def duration_s(self) -> float:
        return len(self.frames) / self.fps


@dataclass(frozen=True)
class SamplerConfig:
    """Tunables for candidate selection; defaults are the operating point."""

    thresholds: tuple[float, float, float] = DEFAULT_THRESHOLDS
    slice_length: int = DEFAULT_SLICE_LENGTH
    min_gap_s: dict[Platform, float] = field(
        default_factory=lambda: dict(DEFAULT_MIN_GAP_S)
    )
    # True: all three slices must exceed their threshold (default reading);
    # False: any single slice suffices.
    require_all_slices: bool = True

    def validate(self) -> None:
        if any(t <= 0 for t in self.thresholds):
            raise ValueError("threshold components must be > 0")
        if self.slice_length < 2:
            raise ValueError("slice_length must be >= 2")


def _box3(arr: np.ndarray) -> np.ndarray:
    """3x3 box filter with edge replication."""
    padded = np.pad(arr, 1, mode="edge")
    out = np.zeros_like(arr, dtype=np.float64)
    for dr in range(3):
        for dc in range(3):
            out += padded[dr : dr + arr.shape[0], dc : dc + arr.shape[1]]
    return out / 9.0


def compute_saliency(frame: np.ndarray) -> np.ndarray:
    """Spectral-residual saliency energy map of a grayscale frame.

    The frame is mean-subtracted first, which makes the map invariant to
    global brightness shifts and maps constant frames to all-zero energy.
    """
    frame = np.asarray(frame)
    if frame.size == 0 or frame.ndim != 2:
        raise EmptyFrame("frame must be a non-empty 2-D intensity matrix")
    if np.issubdtype(frame.dtype, np.integer):
        # exact mean subtraction: n*x - sum(x) is shift-invariant in integers,
        # so globally brightness-shifted frames produce bit-identical maps
        n = frame.size
        total = int(frame.sum(dtype=np.int64))
        f = (frame.astype(np.int64) * n - total).astype(np.float64) / n
    else:
        f = frame.astype(np.float64)
        f = f - f.mean()
    if not np.any(f):
        return np.zeros_like(f, dtype=np.float64)
    spectrum = np.fft.fft2(f)
    amplitude = np.abs(spectrum)
    phase = np.angle(spectrum)
    log_amplitude = np.log(amplitude + KL_EPS)
    residual = log_amplitude - _box3(log_amplitude)
    recon = np.fft.ifft2(np.exp(residual + 1j * phase))
    energy = np.abs(recon) ** 2
    return _box3(energy)


@dataclass(frozen=True)
class Slices:
    vertical: np.ndarray
    horizontal: np.ndarray
    diagonal: np.ndarray
    degenerate: bool

    def as_tuple(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.vertical, self.horizontal, self.diagonal)


def _resample(values: np.ndarray, length: int) -> np.ndarray:
    if len(values) == length:
        return values.astype(np.float64)
    src = np.linspace(0.0, 1.0, len(values))
    dst = np.linspace(0.0, 1.0, length)
    return np.interp(dst, src, values)


def _diagonal_profile(sal: np.ndarray) -> np.ndarray:
    """Main diagonal sampled as if the map were square (bilinear)."""
    h, w = sal.shape
    n = max(h, w)
    t = np.linspace(0.0, 1.0, n)
    rows = t * (h - 1)
    cols = t * (w - 1)
    r0 = np.floor(rows).astype(int)
    c0 = np.floor(cols).astype(int)
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)
    fr = rows - r0
    fc = cols - c0
    top = sal[r0, c0] * (1 - fc) + sal[r0, c1] * fc
    bottom = sal[r1, c0] * (1 - fc) + sal[r1, c1] * fc
    return top * (1 - fr) + bottom * fr


def _normalize(values: np.ndarray) -> np.ndarray:
    smoothed = values + SLICE_EPS
    return smoothed / smoothed.sum()


def extract_slices(sal: np.ndarray, length: int = DEFAULT_SLICE_LENGTH) -> Slices:
    """Three L1-normalized temporal-slice probability vectors of `length`.

    An all-zero map is degenerate: the smoothing limit yields three uniform
    vectors, and the result is flagged so callers can tell.
    """
    sal = np.asarray(sal, dtype=np.float64)
    if sal.size == 0 or sal.ndim != 2:
        raise EmptyFrame("saliency map must be a non-empty 2-D matrix")
    if length < 2:
        raise ValueError("slice length must be >= 2")
    h, w = sal.shape
    vertical = _normalize(_resample(sal[:, w // 2], length))
    horizontal = _normalize(_resample(sal[h // 2, :], length))
    diagonal = _normalize(_resample(_diagonal_profile(sal), length))
    return Slices(
        vertical=vertical,
        horizontal=horizontal,
        diagonal=diagonal,
        degenerate=not bool(np.any(sal)),
    )


def kl_divergence(p: Sequence[float], q: Sequence[float]) -> float:
    """KL divergence sum(p * ln(p/q)) with a 1e-12 floor on both operands."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.ndim != 1 or q.ndim != 1 or p.shape != q.shape:
        raise LengthMismatch(f"probability vectors differ in shape: {p.shape} vs {q.shape}")
    pf = np.maximum(p, KL_EPS)
    qf = np.maximum(q, KL_EPS)
    return float(np.sum(pf * np.log(pf / qf)))


def _divergence_vector(current: Slices, previous: Slices) -> tuple[float, float, float]:
    # float rounding can leave KL at -1e-17 on near-identical slices; the
    # divergence vector is non-negative by definition, so clamp at zero
    return tuple(
        max(0.0, kl_divergence(c, p))
        for c, p in zip(current.as_tuple(), previous.as_tuple())
    )


def select_candidates(
    stream: FrameStream, config: SamplerConfig | None = None
) -> list[CandidateFrame]:
    """Sequential fold over the stream; deterministic for a fixed stream."""
    config = config or SamplerConfig()
    config.validate()
    if not stream.frames:
        raise EmptyFrame("stream has no frames")
    min_gap_frames = config.min_gap_s[stream.platform_profile] * stream.fps

    candidates = [
        CandidateFrame(0, 0.0, SliceVector(0.0, 0.0, 0.0), CandidateReason.INITIAL)
    ]
    previous_slices = extract_slices(compute_saliency(stream.frames[0]), config.slice_length)
    previous_s = (0.0, 0.0, 0.0)
    last_index = 0
    for t in range(1, len(stream.frames)):
        current_slices = extract_slices(
            compute_saliency(stream.frames[t]), config.slice_length
        )
        s_t = _divergence_vector(current_slices, previous_slices)
        jumps = [s_t[k] - previous_s[k] for k in range(3)]
        exceeded = [jumps[k] > config.thresholds[k] for k in range(3)]
        hit = all(exceeded) if config.require_all_slices else any(exceeded)
        if hit and (t - last_index) + 1e-9 >= min_gap_frames:
            candidates.append(
                CandidateFrame(
                    frame_index=t,
                    timestamp_s=t / stream.fps,
                    divergence=SliceVector(*s_t),
                    reason=CandidateReason.DIVERGENCE_JUMP,
                )
            )
            last_index = t
        previous_slices = current_slices
        previous_s = s_t
    return candidates


# frame-stream adapter: a directory of sequentially numbered 8-bit binary
# PGM files plus meta.json {fps, platform}, produced by any external decoder

_PGM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n)*(\S+)")


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise MissingFrames(f"{path}: not a binary (P5) PGM file")
    pos = 2
    header = []
    while len(header) < 3:
        match = _PGM_TOKEN.match(data, pos)
        if not match:
            raise MissingFrames(f"{path}: truncated PGM header")
        header.append(int(match.group(1)))
        pos = match.end()
    width, height, maxval = header
    if maxval > 255:
        raise MissingFrames(f"{path}: only 8-bit PGM supported, maxval={maxval}")
    pos += 1  # single whitespace byte after maxval
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    if pixels.size != width * height:
        raise MissingFrames(f"{path}: truncated PGM payload")
    return pixels.reshape(height, width)


def write_pgm(path, frame: np.ndarray) -> None:
    frame = np.asarray(frame, dtype=np.uint8)
    height, width = frame.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(frame.tobytes())


def load_frame_stream(frames_dir, record_id: str) -> FrameStream:
    frames_dir = Path(frames_dir)
    meta_path = frames_dir / "meta.json"
    if not frames_dir.is_dir() or not meta_path.is_file():
        raise MissingFrames(f"no frame stream at {frames_dir}")
    meta = json.loads(meta_path.read_text())
    paths = sorted(frames_dir.glob("*.pgm"))
    if not paths:
        raise MissingFrames(f"no .pgm frames in {frames_dir}")
    frames = tuple(read_pgm(p) for p in paths)
    return FrameStream(
        record_id=record_id,
        fps=float(meta["fps"]),
        frames=frames,
        platform_profile=Platform(meta["platform"]),
    )


def frame_paths(frames_dir) -> list[Path]:
    return sorted(Path(frames_dir).glob("*.pgm"))


def candidates_to_json(candidates: Iterable[CandidateFrame]) -> str:
    rows = [
        {
            "frame_index": c.frame_index,
            "timestamp_s": c.timestamp_s,
            "divergence": list(c.divergence.as_tuple()),
            "reason": c.reason.value,
        }
        for c in candidates
    ]
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def candidates_from_json(text: str) -> list[CandidateFrame]:
    return [
        CandidateFrame(
            frame_index=int(row["frame_index"]),
            timestamp_s=float(row["timestamp_s"]),
            divergence=SliceVector(*row["divergence"]),
            reason=CandidateReason(row["reason"]),
        )
        for row in json.loads(text)
    ]
