#!/usr/bin/env python3
"""Regenerate the committed fixtures under fixtures/.

Builds the 12-record demo corpus (manifest, stub media, PGM frame streams
with OCR sidecars, annotation log), the 50-record kappa fixture log, and
the oracle-computed misspelling fixture. Everything is deterministic; the
script asserts the properties the tests rely on before writing.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from oracles import oracle_correct
from vidreq.annotate import LabelStore, SessionMode
from vidreq.model import Platform
from vidreq.relevance import Label
from vidreq.sampling import select_candidates, write_pgm
from vidreq.spelling import load_lexicon
from vidreq.synthetic import cut_indices, scene_stream

FIXTURES = ROOT / "fixtures"


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def _record(
    rid, platform, product, category, title, description, duration_s, views,
    media=None, official=False,
):
    return {
        "id": rid,
        "platform": platform,
        "product": product,
        "category": category,
        "title": title,
        "description": description,
        "creator_handle": f"@{rid}",
        "is_official_account": official,
        "duration_s": duration_s,
        "view_count": views,
        "media_path": media,
        "language": "und",
    }


MEDIA = {
    "r01": (
        "en",
        [
            [0.0, 6.0, "my honest notely review after one month of daily notes."],
            [6.0, 11.0, "the battery drain from notely background sync is a real bug "
                        "and the update broke offline mode. i want a dark mode feature."],
        ],
    ),
    "r02": (
        "en",
        [
            [0.0, 90.0, "why i switched to notely for all my notes. the new update made "
                        "sync fast and the search feature is excellent."],
            [90.0, 210.0, "one bug i found is the export crash when a note has images. "
                          "overall a solid review score from me."],
        ],
    ),
    "r03": (
        "en",
        [
            [0.0, 25.0, "morning vibes with my aesthetic desk and my cozy unboxing haul. "
                        "coffee first then we vibe. just a chill aesthetic day in my life."],
        ],
    ),
    "r04": (
        "en",
        [
            [0.0, 60.0, "quick unboxing of my new desk haul for the aesthetic vibes. there "
                        "is a notely sticker on the laptop. pure cozy vibes today."],
        ],
    ),
    "r05": (
        "en",
        [
            [0.0, 9.0, "this notely update deserves a rant. sync keeps failing and the "
                       "app will crash on save."],
            [9.0, 18.0, "the battery cost doubled. please fix this bug and bring back "
                        "the old feature."],
        ],
    ),
    "r06": (
        "en",
        [
            [0.0, 60.0, "full deep dive review of notely starting with the sync feature "
                        "and the battery impact."],
            [1700.0, 1790.0, "the export bug still causes a crash in this update."],
            [1795.0, 1900.0, "final verdict and review summary with a feature wish list."],
            [2000.0, 2100.0, "bonus content recorded after the transcription cap."],
        ],
    ),
    "r07": (
        "en",
        [
            [0.0, 20.0, "fonex camera review versus the older model. the zoom feature is "
                        "sharp but night mode has a focus bug."],
            [20.0, 40.0, "battery life in review tests looks strong after the update."],
        ],
    ),
    "r08": (
        "en",
        [
            [0.0, 45.0, "fonex asmr unboxing. listen to the box sounds. pure unboxing "
                        "vibes and cozy aesthetic haul satisfaction."],
        ],
    ),
    "r09": ("en", []),  # silent video: no speech segments at all
    "r11": (
        "en",
        [[0.0, 20.0, "introducing notely premium, the official update from the notely team."]],
    ),
    "r12": (
        "de",
        [[0.0, 30.0, "dieses handy ist wunderbar und ich liebe es sehr."]],
    ),
}

RECORDS = [
    _record("r01", "TikTok", "notely", "Software", "notely app honest review",
            "one month with the notely app and what i think of it", 12.0, 8000,
            media="media/r01.json"),
    _record("r02", "YouTube", "notely", "Software", "why i switched to notely",
            "", 300.0, 20000, media="media/r02.json"),
    _record("r03", "TikTok", "notely", "Software", "day in my life",
            "a calm morning with coffee and my desk", 30.0, 150000,
            media="media/r03.json"),
    _record("r04", "YouTube", "notely", "Software", "desk setup unboxing",
            "unboxing the new desk setup that you all asked about", 120.0, 4000,
            media="media/r04.json"),
    _record("r05", "TikTok", "notely", "Software", "notely update rant",
            "the new notely update is not it and here is why", 20.0, 52000,
            media="media/r05.json"),
    _record("r06", "YouTube", "notely", "Software", "notely deep dive review",
            "a very long and detailed review of the notely app", 2400.0, 9000,
            media="media/r06.json"),
    _record("r07", "TikTok", "fonex", "Phone", "fonex camera test",
            "testing the fonex camera against my old phone", 45.0, 31000,
            media="media/r07.json"),
    _record("r08", "YouTube", "fonex", "Phone", "fonex asmr unboxing",
            "relaxing unboxing sounds of the new fonex box", 60.0, 75000,
            media="media/r08.json"),
    _record("r09", "TikTok", "fonex", "Phone", "fonex silent showcase",
            "silent showcase of the fonex phone with all the details on screen",
            15.0, 12000, media="media/r09.json"),
    _record("r10", "YouTube", "fonex", "Phone", "thoughts on fonex",
            "short thoughts on the fonex phone, mostly vibes and nothing else really",
            90.0, 800),
    _record("r11", "TikTok", "notely", "Software", "notely premium launch",
            "the official launch video for notely premium", 30.0, 500000,
            media="media/r11.json", official=True),
    _record("r12", "YouTube", "fonex", "Phone", "fonex eindruck",
            "das beste handy das ich je benutzt habe und meine meinung dazu",
            180.0, 2500, media="media/r12.json"),
]

# frames: record -> (fps, scene lengths, texture seed)
FRAME_STREAMS = {
    "r01": (4.0, [16, 16], 101),
    "r05": (4.0, [12, 12], 105),
    "r09": (4.0, [10, 14], 109),
}

# OCR sidecars: record -> {frame_index: regions}
SIDECARS = {
    "r01": {
        0: [{"x": 2, "y": 2, "w": 40, "h": 10, "text": "NOTE APP REVIEW"}],
        16: [
            {"x": 2, "y": 20, "w": 44, "h": 8, "text": "battery drain is fast"},
            {"x": 1, "y": 60, "w": 20, "h": 2, "text": "tiny watermark"},
        ],
    },
    "r05": {
        0: [{"x": 4, "y": 6, "w": 40, "h": 8, "text": "big update rant"}],
        12: [{"x": 4, "y": 30, "w": 40, "h": 8, "text": "sync is broken agin"}],
    },
    "r09": {
        0: [{"x": 2, "y": 10, "w": 40, "h": 6, "text": "unboxing the new case"}],
        10: [{"x": 2, "y": 40, "w": 40, "h": 3, "text": "aesthetic haul vibes"}],
    },
}

PAIR_LABELS = {
    "alice": {"r01": "Relevant", "r02": "Relevant", "r03": "Irrelevant", "r04": "Relevant"},
    "bob": {"r01": "Relevant", "r02": "Relevant", "r03": "Irrelevant", "r04": "Irrelevant"},
}
SOLO_LABELS = {
    "r05": "Relevant",
    "r06": "Relevant",
    "r07": "Relevant",
    "r08": "Irrelevant",
    "r09": "Irrelevant",
    "r10": "Irrelevant",
}

MISSPELLINGS = [
    "speling", "korrectud", "bycycle", "inconvient", "arrainged", "peotry", "teh",
    "recieve", "adress", "wich", "occured", "seperate", "definately", "goverment",
    "beleive", "calender", "embarass", "existance", "foriegn", "freind", "futher",
    "gaurd", "happend", "immediatly", "independant", "intrest", "knowlege", "libary",
    "neccessary", "occassion", "pavillion", "persistant", "posession", "prefered",
    "privelege", "reccomend", "refered", "relevent", "religous", "repitition",
    "shedule", "succesful", "tommorow", "truely", "untill", "wierd", "writting",
    "yeild", "publically", "agin",
]


def build_corpus12() -> None:
    base = FIXTURES / "corpus12"
    if base.exists():
        shutil.rmtree(base)
    _write_json(
        base / "corpus.json",
        {
            "schema_version": 1,
            "records": RECORDS,
            "search_terms": {"notely": "notely app", "fonex": "fonex phone"},
        },
    )
    for rid, (language, segments) in MEDIA.items():
        _write_json(
            base / "media" / f"{rid}.json",
            {
                "language": language,
                "segments": [{"start": s, "end": e, "text": t} for s, e, t in segments],
            },
        )
    for rid, (fps, scenes, seed) in FRAME_STREAMS.items():
        stream = scene_stream(rid, fps, Platform.TIKTOK, scenes, seed=seed, shape=(64, 48))
        frame_dir = base / "frames" / rid
        frame_dir.mkdir(parents=True, exist_ok=True)
        _write_json(frame_dir / "meta.json", {"fps": fps, "platform": "TikTok"})
        for index, frame in enumerate(stream.frames):
            write_pgm(frame_dir / f"{index:06d}.pgm", frame)
        for index, regions in SIDECARS[rid].items():
            _write_json(frame_dir / f"{index:06d}.pgm.regions.json", {"regions": regions})
        # the sampler must pick exactly frame 0 plus each scene cut
        expected = [0] + cut_indices(scenes)
        got = [c.frame_index for c in select_candidates(stream)]
        assert got == expected, f"{rid}: candidates {got} != {expected}"

    store = LabelStore(base / "labels.log.jsonl", known_records=[r["id"] for r in RECORDS])
    pair = store.create_session(
        SessionMode.PAIR, ["alice", "bob"], ["r01", "r02", "r03", "r04"]
    )
    for annotator, labels in PAIR_LABELS.items():
        for rid, label in labels.items():
            store.record_label(pair, rid, annotator, Label(label))
    store.record_resolution(pair, "r04", Label.IRRELEVANT)
    solo = store.create_session(SessionMode.SOLO, ["carol"], sorted(SOLO_LABELS))
    for rid, label in sorted(SOLO_LABELS.items()):
        store.record_label(solo, rid, "carol", Label(label))
    report = store.agreement(pair)
    assert abs(report.kappa - 0.5) < 1e-12, report.kappa
    truth = store.export_ground_truth()
    assert len(truth) == 10, len(truth)
    assert sum(1 for e in truth if e.label is Label.RELEVANT) == 5


def build_kappa_fixture() -> None:
    base = FIXTURES / "kappa"
    if base.exists():
        shutil.rmtree(base)
    record_ids = [f"k{i:03d}" for i in range(1, 51)]
    _write_json(
        base / "corpus.json",
        {
            "schema_version": 1,
            "records": [
                _record(rid, "TikTok", "kappa-demo", "Software",
                        f"demo video {rid}", "demo description for the agreement fixture",
                        10.0, 1)
                for rid in record_ids
            ],
            "search_terms": {"kappa-demo": "kappa demo"},
        },
    )
    store = LabelStore(base / "labels.log.jsonl", known_records=record_ids)
    session = store.create_session(SessionMode.PAIR, ["alice", "bob"], record_ids)
    cells = [
        (Label.RELEVANT, Label.RELEVANT, 20),
        (Label.RELEVANT, Label.IRRELEVANT, 5),
        (Label.IRRELEVANT, Label.RELEVANT, 10),
        (Label.IRRELEVANT, Label.IRRELEVANT, 15),
    ]
    index = 0
    for label_a, label_b, count in cells:
        for _ in range(count):
            rid = record_ids[index]
            store.record_label(session, rid, "alice", label_a)
            store.record_label(session, rid, "bob", label_b)
            index += 1
    report = store.agreement(session)
    assert abs(report.kappa - 0.4) < 1e-12, report.kappa
    assert report.confusion == ((20, 5), (10, 15))


def build_misspellings() -> None:
    lexicon = load_lexicon()
    expected = {}
    for wrong in sorted(set(MISSPELLINGS)):
        assert wrong not in lexicon, f"{wrong!r} is itself a lexicon word"
        expected[wrong] = oracle_correct(wrong, lexicon)
    _write_json(FIXTURES / "misspellings.json", expected)
    sample = {w: expected[w] for w in ("speling", "korrectud", "teh", "agin")}
    print("  sample corrections:", sample)
    assert expected["speling"] == "spelling"
    assert expected["korrectud"] == "corrected"
    assert expected["teh"] == "the"


def main() -> None:
    print("building corpus12 ...")
    build_corpus12()
    print("building kappa fixture ...")
    build_kappa_fixture()
    print("building misspellings fixture ...")
    build_misspellings()
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
