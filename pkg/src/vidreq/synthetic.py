"""Deterministic synthetic frame streams for tests, fixtures, and demos.

A stream is a sequence of static "scenes": every frame inside a scene is
the same seeded random texture, so per-slice divergence is exactly zero
within a scene and jumps only at scene cuts.
"""

from __future__ import annotations

import numpy as np

from .model import Platform
from .sampling import FrameStream


def texture(shape: tuple[int, int], seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, shape).astype(np.uint8)


def scene_stream(
    record_id: str,
    fps: float,
    platform: Platform,
    scene_lengths: list[int],
    seed: int = 0,
    shape: tuple[int, int] = (36, 48),
) -> FrameStream:
    """One static random texture per scene, `scene_lengths[i]` frames each."""
    frames: list[np.ndarray] = []
    for index, length in enumerate(scene_lengths):
        frame = texture(shape, [seed, index])
        frames.extend([frame] * length)
    return FrameStream(
        record_id=record_id, fps=fps, frames=tuple(frames), platform_profile=platform
    )


def cut_indices(scene_lengths: list[int]) -> list[int]:
    """Frame indices where a new scene starts (excluding frame 0)."""
    cuts = []
    position = 0
    for length in scene_lengths[:-1]:
        position += length
        cuts.append(position)
    return cuts
