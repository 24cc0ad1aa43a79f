"""Human labeling sessions, Cohen's kappa, and ground-truth export.

All mutations append to a JSONL event log (`labels.log.jsonl`); replaying
the log reproduces the store exactly. Re-labeling by the same annotator
supersedes (latest wins) while history stays in the log. Theme names share
this single-writer log so the annotation service owns every human edit.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    ForeignAnnotator,
    KeySetMismatch,
    UnassignedRecord,
    UnknownSession,
    UnresolvedDisagreement,
)
from .relevance import Label, LabeledExample


class SessionMode(str, Enum):
    PAIR = "Pair"
    SOLO = "Solo"


_MODE_ANNOTATORS = {SessionMode.PAIR: 2, SessionMode.SOLO: 1}


@dataclass(frozen=True)
class AnnotationSession:
    session_id: str
    mode: SessionMode
    annotators: tuple[str, ...]
    assigned_records: tuple[str, ...]
    created_at: str


@dataclass(frozen=True)
class AgreementReport:
    kappa: float
    observed_agreement: float
    expected_agreement: float
    confusion: tuple[tuple[int, int], tuple[int, int]]
    disagreements: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
            "confusion": [list(self.confusion[0]), list(self.confusion[1])],
            "disagreements": list(self.disagreements),
        }


def compute_kappa(
    labels_a: Mapping[str, Label], labels_b: Mapping[str, Label]
) -> AgreementReport:
    """Cohen's kappa over two raters' label maps with identical key sets.

    kappa = (p_o - p_e) / (1 - p_e). The degenerate p_e = 1 case is defined
    as 1.0 when p_o = 1 and 0.0 otherwise.
    """
    if set(labels_a) != set(labels_b):
        raise KeySetMismatch(
            f"raters labeled different records: {sorted(set(labels_a) ^ set(labels_b))}"
        )
    if not labels_a:
        raise KeySetMismatch("no records to compare")
    order = (Label.RELEVANT, Label.IRRELEVANT)
    index = {label: i for i, label in enumerate(order)}
    counts = [[0, 0], [0, 0]]
    disagreements = []
    for record_id in sorted(labels_a):
        a, b = labels_a[record_id], labels_b[record_id]
        counts[index[a]][index[b]] += 1
        if a != b:
            disagreements.append(record_id)
    n = len(labels_a)
    observed = (counts[0][0] + counts[1][1]) / n
    marginal_a = [(counts[i][0] + counts[i][1]) / n for i in range(2)]
    marginal_b = [(counts[0][j] + counts[1][j]) / n for j in range(2)]
    expected = marginal_a[0] * marginal_b[0] + marginal_a[1] * marginal_b[1]
    if expected >= 1.0:
        kappa = 1.0 if observed >= 1.0 else 0.0
    else:
        kappa = (observed - expected) / (1.0 - expected)
    return AgreementReport(
        kappa=kappa,
        observed_agreement=observed,
        expected_agreement=expected,
        confusion=((counts[0][0], counts[0][1]), (counts[1][0], counts[1][1])),
        disagreements=tuple(disagreements),
    )


@dataclass
class _SessionState:
    session: AnnotationSession
    # (record_id, annotator) -> latest label
    labels: dict[tuple[str, str], Label] = field(default_factory=dict)
    resolutions: dict[str, Label] = field(default_factory=dict)


class LabelStore:
    """Append-only, single-writer store backed by a JSONL event log."""

    def __init__(self, log_path, known_records: Iterable[str] | None = None):
        self._path = Path(log_path)
        self._lock = threading.Lock()
        self._known_records = set(known_records) if known_records is not None else None
        self._sessions: dict[str, _SessionState] = {}
        self._theme_names: dict[tuple[str, int], str] = {}
        self._event_count = 0
        if self._path.exists():
            with self._path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self._apply(json.loads(line))

    # -- event application (replay and live writes share this path) --

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "session_created":
            session = AnnotationSession(
                session_id=event["session_id"],
                mode=SessionMode(event["mode"]),
                annotators=tuple(event["annotators"]),
                assigned_records=tuple(event["record_ids"]),
                created_at=event.get("at", ""),
            )
            self._sessions[session.session_id] = _SessionState(session=session)
        elif kind == "label":
            state = self._sessions[event["session_id"]]
            state.labels[(event["record_id"], event["annotator"])] = Label(event["label"])
        elif kind == "resolution":
            state = self._sessions[event["session_id"]]
            state.resolutions[event["record_id"]] = Label(event["label"])
        elif kind == "theme_name":
            key = (event["product"], int(event["cluster_id"]))
            self._theme_names[key] = event["name"]
        else:
            raise ValueError(f"unknown event type {kind!r}")
        self._event_count += 1

    def _append(self, event: dict) -> None:
        self._apply(event)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with self._path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    # -- commands --

    def create_session(
        self,
        mode: SessionMode,
        annotators: list[str],
        record_ids: list[str],
        created_at: str = "",
    ) -> str:
        if len(set(annotators)) != len(annotators):
            raise ValueError("annotators must be distinct")
        if len(annotators) != _MODE_ANNOTATORS[mode]:
            raise ValueError(
                f"{mode.value} sessions need exactly {_MODE_ANNOTATORS[mode]} annotator(s)"
            )
        if self._known_records is not None:
            unknown = [r for r in record_ids if r not in self._known_records]
            if unknown:
                raise UnassignedRecord(f"records not in corpus: {unknown}")
        with self._lock:
            session_id = f"s{len(self._sessions) + 1:04d}"
            self._append(
                {
                    "type": "session_created",
                    "session_id": session_id,
                    "mode": mode.value,
                    "annotators": list(annotators),
                    "record_ids": list(record_ids),
                    "at": created_at,
                }
            )
        return session_id

    def record_label(
        self, session_id: str, record_id: str, annotator: str, label: Label
    ) -> LabeledExample:
        with self._lock:
            state = self._get(session_id)
            if annotator not in state.session.annotators:
                raise ForeignAnnotator(f"{annotator!r} is not part of session {session_id}")
            if record_id not in state.session.assigned_records:
                raise UnassignedRecord(f"{record_id!r} is not assigned to session {session_id}")
            self._append(
                {
                    "type": "label",
                    "session_id": session_id,
                    "record_id": record_id,
                    "annotator": annotator,
                    "label": label.value,
                }
            )
        return LabeledExample(
            record_id=record_id, text="", label=label, annotator=annotator, session=session_id
        )

    def record_resolution(self, session_id: str, record_id: str, label: Label) -> None:
        with self._lock:
            state = self._get(session_id)
            if record_id not in state.session.assigned_records:
                raise UnassignedRecord(f"{record_id!r} is not assigned to session {session_id}")
            self._append(
                {
                    "type": "resolution",
                    "session_id": session_id,
                    "record_id": record_id,
                    "label": label.value,
                }
            )

    def set_theme_name(self, product: str, cluster_id: int, name: str) -> None:
        with self._lock:
            self._append(
                {
                    "type": "theme_name",
                    "product": product,
                    "cluster_id": cluster_id,
                    "name": name,
                }
            )

    # -- queries --

    def _get(self, session_id: str) -> _SessionState:
        state = self._sessions.get(session_id)
        if state is None:
            raise UnknownSession(f"no session {session_id!r}")
        return state

    def session(self, session_id: str) -> AnnotationSession:
        return self._get(session_id).session

    def sessions(self) -> list[AnnotationSession]:
        return [state.session for state in self._sessions.values()]

    def labels_of(self, session_id: str, annotator: str) -> dict[str, Label]:
        state = self._get(session_id)
        return {
            record_id: label
            for (record_id, who), label in state.labels.items()
            if who == annotator
        }

    def pending_records(self, session_id: str, annotator: str) -> list[str]:
        """Assigned records this annotator has not labeled yet, in order."""
        state = self._get(session_id)
        if annotator not in state.session.annotators:
            raise ForeignAnnotator(f"{annotator!r} is not part of session {session_id}")
        done = {rid for (rid, who) in state.labels if who == annotator}
        return [rid for rid in state.session.assigned_records if rid not in done]

    def theme_names(self) -> dict[tuple[str, int], str]:
        return dict(self._theme_names)

    def agreement(self, session_id: str) -> AgreementReport:
        state = self._get(session_id)
        if state.session.mode is not SessionMode.PAIR:
            raise KeySetMismatch(f"session {session_id} is not a pair session")
        first, second = state.session.annotators
        labels_a = self.labels_of(session_id, first)
        labels_b = self.labels_of(session_id, second)
        common = sorted(set(labels_a) & set(labels_b))
        if not common:
            raise KeySetMismatch("no records labeled by both annotators yet")
        return compute_kappa(
            {r: labels_a[r] for r in common}, {r: labels_b[r] for r in common}
        )

    def export_ground_truth(self) -> list[LabeledExample]:
        """Merged ground truth across sessions (first session wins per record).

        Pair-session records need agreement or an explicit resolution; solo
        labels pass through. Records nobody labeled yet are skipped.
        """
        out: list[LabeledExample] = []
        seen: set[str] = set()
        unresolved: list[str] = []
        for state in self._sessions.values():
            session = state.session
            if session.mode is SessionMode.PAIR:
                first, second = session.annotators
                labels_a = self.labels_of(session.session_id, first)
                labels_b = self.labels_of(session.session_id, second)
                for record_id in session.assigned_records:
                    a, b = labels_a.get(record_id), labels_b.get(record_id)
                    if a is None and b is None:
                        continue
                    if record_id in seen:
                        continue
                    resolution = state.resolutions.get(record_id)
                    if a is not None and b is not None and a == b:
                        label, annotator = a, "+".join(session.annotators)
                    elif resolution is not None:
                        label, annotator = resolution, "resolution"
                    else:
                        unresolved.append(record_id)
                        continue
                    seen.add(record_id)
                    out.append(
                        LabeledExample(
                            record_id=record_id,
                            text="",
                            label=label,
                            annotator=annotator,
                            session=session.session_id,
                        )
                    )
            else:
                annotator = session.annotators[0]
                labels = self.labels_of(session.session_id, annotator)
                for record_id in session.assigned_records:
                    label = labels.get(record_id)
                    if label is None or record_id in seen:
                        continue
                    seen.add(record_id)
                    out.append(
                        LabeledExample(
                            record_id=record_id,
                            text="",
                            label=label,
                            annotator=annotator,
                            session=session.session_id,
                        )
                    )
        if unresolved:
            raise UnresolvedDisagreement(unresolved)
        return out
