import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vidreq.errors import EmptyFrame, LengthMismatch, MissingFrames
from vidreq.model import Platform
from vidreq.sampling import (
    FrameStream,
    SamplerConfig,
    compute_saliency,
    extract_slices,
    kl_divergence,
    load_frame_stream,
    read_pgm,
    select_candidates,
    write_pgm,
)
from vidreq.synthetic import scene_stream, texture

from oracles import oracle_candidates


# -- saliency --------------------------------------------------------------


def test_constant_frame_zero_map():
    frame = np.full((24, 24), 128, dtype=np.uint8)
    assert not compute_saliency(frame).any()


def test_empty_frame_rejected():
    with pytest.raises(EmptyFrame):
        compute_saliency(np.zeros((0, 0)))


def test_bright_pixel_peaks_nearby():
    frame = np.zeros((32, 32), dtype=np.uint8)
    frame[10, 20] = 255
    sal = compute_saliency(frame)
    assert (sal >= 0).all()
    peak = np.unravel_index(sal.argmax(), sal.shape)
    assert abs(peak[0] - 10) <= 2 and abs(peak[1] - 20) <= 2


def test_brightness_shift_invariance():
    base = texture((24, 32), seed=11) % 180
    shifted = (base.astype(np.int64) + 60).astype(np.uint8)
    assert np.array_equal(compute_saliency(base), compute_saliency(shifted))


# -- slices ----------------------------------------------------------------


def test_center_row_slice_normalization():
    sal = np.zeros((4, 4))
    sal[2] = [2, 2, 4, 0]
    slices = extract_slices(sal, 4)
    assert np.allclose(slices.horizontal, [0.25, 0.25, 0.5, 0.0], atol=1e-9)
    assert not slices.degenerate


def test_all_zero_map_uniform_and_flagged():
    slices = extract_slices(np.zeros((6, 8)), 4)
    for vec in slices.as_tuple():
        assert np.allclose(vec, 0.25, atol=1e-12)
    assert slices.degenerate


def test_slices_sum_to_one():
    rng = np.random.default_rng(0)
    for _ in range(10):
        sal = rng.random((rng.integers(3, 20), rng.integers(3, 20)))
        slices = extract_slices(sal, 64)
        for vec in slices.as_tuple():
            assert abs(vec.sum() - 1.0) < 1e-9
            assert (vec >= 0).all()


def test_slice_length_validation():
    with pytest.raises(ValueError):
        extract_slices(np.ones((4, 4)), 1)


# -- KL divergence ---------------------------------------------------------


def test_kl_identical_exactly_zero():
    assert kl_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0


def test_kl_hand_value():
    expected = 0.5 * math.log(2) + 0.5 * math.log(2 / 3)
    assert abs(kl_divergence([0.5, 0.5], [0.25, 0.75]) - expected) < 1e-12
    assert abs(kl_divergence([0.5, 0.5], [0.25, 0.75]) - 0.143841) < 1e-6


def test_kl_with_zero_component():
    assert abs(kl_divergence([1.0, 0.0], [0.5, 0.5]) - math.log(2)) < 1e-4


def test_kl_length_mismatch():
    with pytest.raises(LengthMismatch):
        kl_divergence([0.5, 0.5], [1.0])


@settings(max_examples=100, deadline=None)
@given(
    weights=st.lists(st.floats(0.0, 1.0), min_size=2, max_size=16),
    other=st.lists(st.floats(0.0, 1.0), min_size=2, max_size=16),
)
def test_kl_gibbs_inequality(weights, other):
    n = min(len(weights), len(other))
    p = np.asarray(weights[:n]) + 1e-9
    q = np.asarray(other[:n]) + 1e-9
    p /= p.sum()
    q /= q.sum()
    assert kl_divergence(p, q) >= -1e-9
    assert kl_divergence(p, p) == 0.0


# -- candidate selection ---------------------------------------------------


def test_identical_frames_only_initial():
    frame = texture((30, 40), seed=3)
    stream = FrameStream("s", 30.0, tuple([frame] * 100), Platform.TIKTOK)
    candidates = select_candidates(stream)
    assert [c.frame_index for c in candidates] == [0]
    assert candidates[0].reason.value == "Initial"
    assert candidates[0].divergence.as_tuple() == (0.0, 0.0, 0.0)


def test_three_scene_stream_matches_oracle():
    stream = scene_stream("s", 30.0, Platform.TIKTOK, [100, 100, 100], seed=1)
    candidates = select_candidates(stream)
    indices = [c.frame_index for c in candidates]
    assert indices == [0, 100, 200]
    assert indices == oracle_candidates(stream)
    for c in candidates[1:]:
        assert all(v > 1e-4 for v in c.divergence.as_tuple())


def test_min_gap_bound_change_every_frame():
    frames = tuple(texture((16, 16), seed=[9, i]) for i in range(90))
    stream = FrameStream("s", 3.0, frames, Platform.TIKTOK)  # 30 s of video
    candidates = select_candidates(stream)
    assert len(candidates) <= 1 + math.floor(stream.duration_s / 1.5)


def test_trailing_identical_frames_add_nothing():
    base = scene_stream("s", 10.0, Platform.TIKTOK, [20, 20], seed=4, shape=(24, 24))
    extended = FrameStream(
        "s", 10.0, base.frames + (base.frames[-1],) * 30, Platform.TIKTOK
    )
    assert [c.frame_index for c in select_candidates(base)] == [
        c.frame_index for c in select_candidates(extended)
    ]


def test_determinism():
    stream = scene_stream("s", 12.0, Platform.YOUTUBE, [15, 15, 15], seed=7, shape=(20, 20))
    first = select_candidates(stream)
    second = select_candidates(stream)
    assert first == second


def test_platform_min_gap_respected():
    # scene cut every 10 frames at 10 fps = every second; YouTube needs 2.5 s
    stream = scene_stream("s", 10.0, Platform.YOUTUBE, [10] * 8, seed=5, shape=(24, 24))
    candidates = select_candidates(stream)
    indices = [c.frame_index for c in candidates]
    gaps = np.diff(indices)
    assert (gaps >= 25).all()
    assert indices == oracle_candidates(stream)


def test_candidate_invariants_random_streams():
    rng = np.random.default_rng(42)
    for trial in range(5):
        scene_lengths = list(rng.integers(5, 30, size=rng.integers(2, 5)))
        fps = float(rng.choice([5.0, 10.0, 24.0]))
        platform = Platform.TIKTOK if trial % 2 else Platform.YOUTUBE
        stream = scene_stream("s", fps, platform, scene_lengths, seed=trial, shape=(20, 24))
        candidates = select_candidates(stream)
        indices = [c.frame_index for c in candidates]
        assert indices[0] == 0
        assert indices == sorted(set(indices))
        min_gap = {Platform.TIKTOK: 1.5, Platform.YOUTUBE: 2.5}[platform]
        assert len(indices) <= 1 + math.floor(stream.duration_s / min_gap)
        assert indices == oracle_candidates(stream)
        for c in candidates:
            assert c.timestamp_s == c.frame_index / fps
            assert all(v >= 0.0 for v in c.divergence.as_tuple())


def test_disjunction_variant_fires_more_often():
    stream = scene_stream("s", 10.0, Platform.TIKTOK, [20, 20], seed=8, shape=(24, 24))
    conjunction = select_candidates(stream, SamplerConfig(require_all_slices=True))
    disjunction = select_candidates(stream, SamplerConfig(require_all_slices=False))
    assert {c.frame_index for c in conjunction} <= {c.frame_index for c in disjunction}


def test_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(thresholds=(0.0, 1e-4, 1e-4)).validate()
    with pytest.raises(ValueError):
        SamplerConfig(slice_length=1).validate()


# -- PGM adapter -----------------------------------------------------------


def test_pgm_round_trip(tmp_path):
    frame = texture((17, 23), seed=2)
    path = tmp_path / "frame.pgm"
    write_pgm(path, frame)
    assert np.array_equal(read_pgm(path), frame)


def test_pgm_header_with_comment(tmp_path):
    path = tmp_path / "c.pgm"
    payload = bytes(range(6))
    path.write_bytes(b"P5\n# a comment\n3 2\n255\n" + payload)
    frame = read_pgm(path)
    assert frame.shape == (2, 3)
    assert frame.tobytes() == payload


def test_load_frame_stream(tmp_path):
    stream_dir = tmp_path / "rec"
    stream_dir.mkdir()
    (stream_dir / "meta.json").write_text('{"fps": 4.0, "platform": "TikTok"}')
    for i in range(3):
        write_pgm(stream_dir / f"{i:06d}.pgm", texture((8, 8), seed=i))
    stream = load_frame_stream(stream_dir, "rec")
    assert stream.fps == 4.0
    assert len(stream.frames) == 3
    assert stream.platform_profile is Platform.TIKTOK


def test_load_frame_stream_missing(tmp_path):
    with pytest.raises(MissingFrames):
        load_frame_stream(tmp_path / "nope", "rec")
