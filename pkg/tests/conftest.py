import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
REPO_ROOT = TESTS_DIR.parent
FIXTURES = REPO_ROOT / "fixtures"

if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture(scope="session")
def lexicon():
    from vidreq.spelling import load_lexicon

    return load_lexicon()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    assert FIXTURES.is_dir(), "run scripts/make_fixtures.py first"
    return FIXTURES


@pytest.fixture()
def corpus12(fixtures_dir, tmp_path) -> Path:
    """Fresh copy of the 12-record fixture corpus."""
    import shutil

    target = tmp_path / "corpus12"
    shutil.copytree(fixtures_dir / "corpus12", target)
    return target


def make_record(rid="r1", **overrides):
    from vidreq.model import Category, Platform, VideoRecord

    fields = dict(
        id=rid,
        platform=Platform.TIKTOK,
        product="notely",
        category=Category.SOFTWARE,
        title="a video",
        description="a description of the video with plenty of the usual words",
        creator_handle="@creator",
        is_official_account=False,
        duration_s=30.0,
        view_count=100,
        media_path=None,
        language="und",
    )
    fields.update(overrides)
    return VideoRecord(**fields)


def make_bundle(rid="r1", audio="", lines=(), language=None):
    from vidreq.model import Segment, TextBundle, VisualLine

    segments = (Segment(0.0, 5.0, audio),) if audio else ()
    return TextBundle(
        record_id=rid,
        audio_text=audio,
        audio_segments=segments,
        visual_lines=tuple(VisualLine(ts, text) for ts, text in lines),
        has_audio_text=bool(audio),
        assembled_at="1970-01-01T00:00:00Z",
        audio_language=language,
    )


@pytest.fixture()
def record_factory():
    return make_record


@pytest.fixture()
def bundle_factory():
    return make_bundle
