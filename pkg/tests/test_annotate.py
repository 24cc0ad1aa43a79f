import json

import pytest

from vidreq.annotate import AgreementReport, LabelStore, SessionMode, compute_kappa
from vidreq.errors import (
    ForeignAnnotator,
    KeySetMismatch,
    UnassignedRecord,
    UnknownSession,
    UnresolvedDisagreement,
)
from vidreq.relevance import Label

R, I = Label.RELEVANT, Label.IRRELEVANT


def maps_from_confusion(rr, ri, ir, ii):
    labels_a, labels_b = {}, {}
    index = 0
    for (a, b), count in [((R, R), rr), ((R, I), ri), ((I, R), ir), ((I, I), ii)]:
        for _ in range(count):
            labels_a[f"v{index:03d}"] = a
            labels_b[f"v{index:03d}"] = b
            index += 1
    return labels_a, labels_b


# -- kappa ------------------------------------------------------------------


def test_kappa_perfect_agreement_mixed_labels():
    labels_a, labels_b = maps_from_confusion(10, 0, 0, 10)
    report = compute_kappa(labels_a, labels_b)
    assert report.kappa == 1.0
    assert report.observed_agreement == 1.0
    assert report.disagreements == ()


def test_kappa_hand_fixture_04():
    labels_a, labels_b = maps_from_confusion(20, 5, 10, 15)
    report = compute_kappa(labels_a, labels_b)
    assert report.observed_agreement == pytest.approx(0.7, abs=1e-12)
    assert report.expected_agreement == pytest.approx(0.5, abs=1e-12)
    assert report.kappa == pytest.approx(0.4, abs=1e-12)
    assert report.confusion == ((20, 5), (10, 15))
    assert len(report.disagreements) == 15


def test_kappa_hand_fixture_02():
    labels_a, labels_b = maps_from_confusion(15, 10, 10, 15)
    report = compute_kappa(labels_a, labels_b)
    assert report.kappa == pytest.approx(0.2, abs=1e-12)


def test_kappa_degenerate_all_relevant():
    labels_a, labels_b = maps_from_confusion(12, 0, 0, 0)
    report = compute_kappa(labels_a, labels_b)
    assert report.expected_agreement == 1.0
    assert report.kappa == 1.0


def test_kappa_symmetry_and_bound():
    labels_a, labels_b = maps_from_confusion(7, 3, 5, 11)
    forward = compute_kappa(labels_a, labels_b)
    backward = compute_kappa(labels_b, labels_a)
    assert forward.kappa == pytest.approx(backward.kappa, abs=1e-12)
    assert forward.kappa <= 1.0
    assert 0.0 <= forward.observed_agreement <= 1.0
    assert 0.0 <= forward.expected_agreement <= 1.0


def test_kappa_key_set_mismatch():
    with pytest.raises(KeySetMismatch):
        compute_kappa({"a": R}, {"b": R})
    with pytest.raises(KeySetMismatch):
        compute_kappa({}, {})


# -- label store --------------------------------------------------------------


@pytest.fixture()
def store(tmp_path):
    return LabelStore(tmp_path / "labels.log.jsonl", known_records=[f"v{i}" for i in range(9)])


def test_record_and_retrieve(store):
    session = store.create_session(SessionMode.SOLO, ["carol"], ["v0", "v1"])
    stored = store.record_label(session, "v0", "carol", R)
    assert stored.record_id == "v0" and stored.label is R
    assert store.labels_of(session, "carol") == {"v0": R}
    assert store.pending_records(session, "carol") == ["v1"]


def test_session_validation(store):
    with pytest.raises(ValueError):
        store.create_session(SessionMode.PAIR, ["solo-only"], ["v0"])
    with pytest.raises(UnassignedRecord):
        store.create_session(SessionMode.SOLO, ["carol"], ["not-in-corpus"])


def test_foreign_annotator(store):
    session = store.create_session(SessionMode.SOLO, ["carol"], ["v0"])
    with pytest.raises(ForeignAnnotator):
        store.record_label(session, "v0", "mallory", R)


def test_unassigned_record(store):
    session = store.create_session(SessionMode.SOLO, ["carol"], ["v0"])
    with pytest.raises(UnassignedRecord):
        store.record_label(session, "v1", "carol", R)


def test_unknown_session(store):
    with pytest.raises(UnknownSession):
        store.record_label("nope", "v0", "carol", R)


def test_latest_label_wins(store):
    session = store.create_session(SessionMode.SOLO, ["carol"], ["v0"])
    store.record_label(session, "v0", "carol", R)
    store.record_label(session, "v0", "carol", I)
    assert store.labels_of(session, "carol") == {"v0": I}


def test_replay_reproduces_store(tmp_path):
    path = tmp_path / "labels.log.jsonl"
    store = LabelStore(path, known_records=["v0", "v1", "v2"])
    pair = store.create_session(SessionMode.PAIR, ["a", "b"], ["v0", "v1"])
    store.record_label(pair, "v0", "a", R)
    store.record_label(pair, "v0", "b", R)
    store.record_label(pair, "v1", "a", R)
    store.record_label(pair, "v1", "b", I)
    store.record_resolution(pair, "v1", I)
    store.set_theme_name("notely", 0, "Bug Report")

    replayed = LabelStore(path)
    assert replayed.sessions() == store.sessions()
    assert replayed.labels_of(pair, "a") == store.labels_of(pair, "a")
    assert replayed.theme_names() == {("notely", 0): "Bug Report"}
    assert replayed.export_ground_truth() == store.export_ground_truth()


def test_export_is_read_only(tmp_path):
    path = tmp_path / "labels.log.jsonl"
    store = LabelStore(path, known_records=["v0"])
    session = store.create_session(SessionMode.SOLO, ["c"], ["v0"])
    store.record_label(session, "v0", "c", R)
    before = path.read_bytes()
    store.export_ground_truth()
    assert path.read_bytes() == before


def test_log_is_append_only_history(tmp_path):
    path = tmp_path / "labels.log.jsonl"
    store = LabelStore(path, known_records=["v0"])
    session = store.create_session(SessionMode.SOLO, ["c"], ["v0"])
    store.record_label(session, "v0", "c", R)
    store.record_label(session, "v0", "c", I)
    events = [json.loads(line) for line in path.read_text().splitlines()]
    labels = [e for e in events if e["type"] == "label"]
    assert [e["label"] for e in labels] == ["Relevant", "Irrelevant"]


# -- export -------------------------------------------------------------------


def test_export_pair_full_agreement(store):
    session = store.create_session(SessionMode.PAIR, ["a", "b"], ["v0", "v1"])
    for rid, label in [("v0", R), ("v1", I)]:
        store.record_label(session, rid, "a", label)
        store.record_label(session, rid, "b", label)
    exported = store.export_ground_truth()
    assert {(e.record_id, e.label) for e in exported} == {("v0", R), ("v1", I)}
    assert all(e.annotator == "a+b" for e in exported)


def test_export_unresolved_disagreement(store):
    session = store.create_session(SessionMode.PAIR, ["a", "b"], ["v0"])
    store.record_label(session, "v0", "a", R)
    store.record_label(session, "v0", "b", I)
    with pytest.raises(UnresolvedDisagreement) as err:
        store.export_ground_truth()
    assert err.value.record_ids == ["v0"]


def test_export_resolution_applies(store):
    session = store.create_session(SessionMode.PAIR, ["a", "b"], ["v0"])
    store.record_label(session, "v0", "a", R)
    store.record_label(session, "v0", "b", I)
    store.record_resolution(session, "v0", I)
    exported = store.export_ground_truth()
    assert exported[0].label is I
    assert exported[0].annotator == "resolution"


def test_export_union_pair_and_solo(store):
    pair = store.create_session(SessionMode.PAIR, ["a", "b"], ["v0", "v1"])
    solo = store.create_session(SessionMode.SOLO, ["c"], ["v1", "v2", "v3"])
    for rid, label in [("v0", R), ("v1", I)]:
        store.record_label(pair, rid, "a", label)
        store.record_label(pair, rid, "b", label)
    for rid, label in [("v1", R), ("v2", R), ("v3", I)]:
        store.record_label(solo, rid, "c", label)
    exported = store.export_ground_truth()
    by_id = {e.record_id: e for e in exported}
    assert set(by_id) == {"v0", "v1", "v2", "v3"}
    # the pair session saw v1 first; its agreed label wins the union
    assert by_id["v1"].label is I
    assert by_id["v1"].session == pair


def test_export_skips_unlabeled(store):
    session = store.create_session(SessionMode.SOLO, ["c"], ["v0", "v1"])
    store.record_label(session, "v0", "c", R)
    exported = store.export_ground_truth()
    assert [e.record_id for e in exported] == ["v0"]


def test_store_agreement_pairs_only(store):
    solo = store.create_session(SessionMode.SOLO, ["c"], ["v0"])
    with pytest.raises(KeySetMismatch):
        store.agreement(solo)


def test_agreement_over_common_subset(store):
    pair = store.create_session(SessionMode.PAIR, ["a", "b"], ["v0", "v1", "v2"])
    store.record_label(pair, "v0", "a", R)
    store.record_label(pair, "v0", "b", R)
    store.record_label(pair, "v1", "a", I)  # b has not labeled v1 yet
    report = store.agreement(pair)
    assert report.kappa == 1.0
    assert isinstance(report, AgreementReport)
