"""Relevance classification: dataset variants, the in-repo reference
classifier, evaluation metrics, and batch corpus classification.

Three text combinations are supported (audio text, visual text, both);
title and description are always included, joined metadata-first with an
explicit separator token. The reference model is TF-IDF plus an
L2-regularized logistic regression; production-grade transformer backends
plug in over HTTP (POST /classify) and are selected with the
VIDREQ_CLASSIFIER_URL environment variable.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Protocol, Sequence

import numpy as np
import requests
from scipy.optimize import minimize
from scipy.special import expit
from scipy.stats import rankdata

from .errors import (
    BackendUnavailable,
    EmptyTestSet,
    InsufficientClassData,
    RecordMismatch,
)
from .model import Platform, TextBundle, VideoRecord
from .textutil import fit_tfidf_vocab, tfidf_matrix

SEPARATOR = " ⟂ "  # joins title, description, and body fields
DECISION_THRESHOLD = 0.5
TRAIN_FRACTION = 0.8
MIN_DOCUMENT_FREQUENCY = 2
L2_PENALTY = 1.0
CONVERGENCE_TOL = 1e-6


class Label(str, Enum):
    RELEVANT = "Relevant"
    IRRELEVANT = "Irrelevant"


class Variant(str, Enum):
    AUDIO_ONLY = "AudioOnly"
    VISUAL_ONLY = "VisualOnly"
    AUDIO_VISUAL = "AudioVisual"


class PlatformScope(str, Enum):
    TIKTOK = "TikTok"
    YOUTUBE = "YouTube"
    BOTH = "Both"


@dataclass(frozen=True)
class DatasetVariant:
    variant: Variant
    platform: PlatformScope = PlatformScope.BOTH

    @property
    def name(self) -> str:
        return f"{self.platform.value.lower()}_{self.variant.value.lower()}"


@dataclass(frozen=True)
class LabeledExample:
    record_id: str
    text: str
    label: Label
    annotator: str
    session: str


@dataclass(frozen=True)
class RelevanceVerdict:
    record_id: str
    label: Label
    score: float
    model_id: str

    def to_dict(self) -> dict:
        return {
            "record_id": self.record_id,
            "label": self.label.value,
            "score": self.score,
            "model_id": self.model_id,
        }


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    auc: float
    n_test: int
    confusion: tuple[tuple[int, int], tuple[int, int]]  # rows=actual, cols=predicted
    dataset: DatasetVariant
    model_id: str

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "auc": self.auc,
            "n_test": self.n_test,
            "confusion": [list(self.confusion[0]), list(self.confusion[1])],
            "dataset": {
                "variant": self.dataset.variant.value,
                "platform": self.dataset.platform.value,
            },
            "model_id": self.model_id,
        }


def assemble_text(bundle: TextBundle, record: VideoRecord, variant: DatasetVariant) -> str:
    """Title, description, then the variant's body fields, separator-joined."""
    if bundle.record_id != record.id:
        raise RecordMismatch(f"bundle {bundle.record_id!r} does not match record {record.id!r}")
    visual = " ".join(line.text for line in bundle.visual_lines)
    parts = [record.title, record.description]
    if variant.variant is Variant.AUDIO_ONLY:
        parts.append(bundle.audio_text)
    elif variant.variant is Variant.VISUAL_ONLY:
        parts.append(visual)
    else:
        parts.extend([bundle.audio_text, visual])
    return SEPARATOR.join(parts)


def in_scope(record: VideoRecord, variant: DatasetVariant) -> bool:
    if variant.platform is PlatformScope.BOTH:
        return True
    return record.platform is Platform(variant.platform.value)


def build_dataset(
    labels: Sequence[LabeledExample],
    bundles: Mapping[str, TextBundle],
    records: Mapping[str, VideoRecord],
    variant: DatasetVariant,
) -> list[LabeledExample]:
    """Fill in assembled text for every labeled record in platform scope."""
    out = []
    for example in labels:
        record = records.get(example.record_id)
        if record is None or not in_scope(record, variant):
            continue
        bundle = bundles.get(example.record_id) or empty_bundle(example.record_id)
        out.append(replace(example, text=assemble_text(bundle, record, variant)))
    return out


def empty_bundle(record_id: str) -> TextBundle:
    return TextBundle(
        record_id=record_id,
        audio_text="",
        audio_segments=(),
        visual_lines=(),
        has_audio_text=False,
        assembled_at="",
        audio_language=None,
    )


def split_dataset(
    examples: Sequence[LabeledExample], seed: int
) -> tuple[list[LabeledExample], list[LabeledExample]]:
    """Stratified 80/20 split, then the test set is balanced by seeded
    down-sampling of its majority class. Train and test never share a record."""
    by_label: dict[Label, list[LabeledExample]] = {Label.RELEVANT: [], Label.IRRELEVANT: []}
    for ex in examples:
        by_label[ex.label].append(ex)
    for label, group in by_label.items():
        if len(group) < 2:
            raise InsufficientClassData(
                f"need >= 2 examples of {label.value}, got {len(group)}"
            )
    rng = random.Random(seed)
    train: list[LabeledExample] = []
    test_by_label: dict[Label, list[LabeledExample]] = {}
    for label in (Label.RELEVANT, Label.IRRELEVANT):
        group = sorted(by_label[label], key=lambda e: (e.record_id, e.annotator, e.session))
        rng.shuffle(group)
        n_train = int(TRAIN_FRACTION * len(group))
        n_train = min(max(n_train, 1), len(group) - 1)  # both splits stay non-empty
        train.extend(group[:n_train])
        test_by_label[label] = group[n_train:]
    floor = min(len(g) for g in test_by_label.values())
    test: list[LabeledExample] = []
    for label in (Label.RELEVANT, Label.IRRELEVANT):
        group = test_by_label[label]
        rng.shuffle(group)
        test.extend(group[:floor])
    rng.shuffle(train)
    rng.shuffle(test)
    return train, test


class Scorer(Protocol):
    model_id: str

    def score_texts(self, texts: Sequence[str]) -> list[float]: ...


@dataclass
class ReferenceModel:
    """TF-IDF + logistic regression stand-in for external transformer models."""

    vocab: list[str]
    idf: np.ndarray
    weights: np.ndarray
    bias: float
    seed: int

    @property
    def model_id(self) -> str:
        return f"ref-tfidf-logreg-s{self.seed}"

    def score_texts(self, texts: Sequence[str]) -> list[float]:
        mat = tfidf_matrix(list(texts), self.vocab, self.idf)
        return [float(s) for s in expit(mat @ self.weights + self.bias)]

    def to_json(self) -> str:
        return json.dumps(
            {
                "model_id": self.model_id,
                "seed": self.seed,
                "vocab": self.vocab,
                "idf": [float(v) for v in self.idf],
                "weights": [float(v) for v in self.weights],
                "bias": self.bias,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReferenceModel":
        raw = json.loads(text)
        return cls(
            vocab=list(raw["vocab"]),
            idf=np.asarray(raw["idf"], dtype=np.float64),
            weights=np.asarray(raw["weights"], dtype=np.float64),
            bias=float(raw["bias"]),
            seed=int(raw["seed"]),
        )


def train_reference(train: Sequence[LabeledExample], seed: int) -> ReferenceModel:
    """Fit the reference classifier to convergence tolerance 1e-6.

    Deterministic for fixed data regardless of seed (L-BFGS from zeros);
    the seed is recorded in the model id for provenance.
    """
    labels = {ex.label for ex in train}
    if labels != {Label.RELEVANT, Label.IRRELEVANT}:
        raise InsufficientClassData("training data must contain both classes")
    texts = [ex.text for ex in train]
    vocab, idf = fit_tfidf_vocab(texts, min_df=MIN_DOCUMENT_FREQUENCY)
    if not vocab:
        raise InsufficientClassData("no token reaches the minimum document frequency")
    mat = tfidf_matrix(texts, vocab, idf)
    y = np.array([1.0 if ex.label is Label.RELEVANT else -1.0 for ex in train])
    d = len(vocab)

    def objective(wb):
        w, b = wb[:d], wb[d]
        yz = y * (mat @ w + b)
        loss = float(np.sum(np.logaddexp(0.0, -yz)) + 0.5 * L2_PENALTY * w @ w)
        slope = -y * expit(-yz)
        grad_w = mat.T @ slope + L2_PENALTY * w
        grad_b = float(slope.sum())
        return loss, np.concatenate([grad_w, [grad_b]])

    result = minimize(
        objective,
        np.zeros(d + 1),
        jac=True,
        method="L-BFGS-B",
        tol=CONVERGENCE_TOL,
        options={"maxiter": 2000},
    )
    return ReferenceModel(
        vocab=vocab,
        idf=idf,
        weights=result.x[:d].copy(),
        bias=float(result.x[d]),
        seed=seed,
    )


def rank_auc(positive_scores: Sequence[float], negative_scores: Sequence[float]) -> float:
    """AUC as the Mann-Whitney pair statistic; ties count one half."""
    pos = np.asarray(positive_scores, dtype=np.float64)
    neg = np.asarray(negative_scores, dtype=np.float64)
    ranks = rankdata(np.concatenate([pos, neg]))
    rank_sum = float(ranks[: len(pos)].sum())
    u = rank_sum - len(pos) * (len(pos) + 1) / 2.0
    return u / (len(pos) * len(neg))


def evaluate(scorer: Scorer, test: Sequence[LabeledExample]) -> EvalReport:
    return evaluate_variant(scorer, test, DatasetVariant(Variant.AUDIO_VISUAL))


def evaluate_variant(
    scorer: Scorer, test: Sequence[LabeledExample], dataset: DatasetVariant
) -> EvalReport:
    if not test:
        raise EmptyTestSet("cannot evaluate on an empty test set")
    if {ex.label for ex in test} != {Label.RELEVANT, Label.IRRELEVANT}:
        raise InsufficientClassData("test set must contain both classes")
    scores = scorer.score_texts([ex.text for ex in test])
    tn = fp = fn = tp = 0
    pos_scores, neg_scores = [], []
    for example, score in zip(test, scores):
        predicted_relevant = score >= DECISION_THRESHOLD
        if example.label is Label.RELEVANT:
            pos_scores.append(score)
            tp += predicted_relevant
            fn += not predicted_relevant
        else:
            neg_scores.append(score)
            fp += predicted_relevant
            tn += not predicted_relevant
    return EvalReport(
        accuracy=(tp + tn) / len(test),
        auc=rank_auc(pos_scores, neg_scores),
        n_test=len(test),
        confusion=((tn, fp), (fn, tp)),
        dataset=dataset,
        model_id=scorer.model_id,
    )


class HttpClassifier:
    """Client for the classifier backend contract.

    POST {base}/classify with {"texts": [...]} must return {"scores": [...]}
    of equal length with scores in [0, 1]; GET {base}/healthz must be 200.
    Any deviation raises BackendUnavailable and aborts the batch.
    """

    def __init__(self, base_url: str, timeout: float = 60.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.model_id = f"http-classifier:{self.base_url}"

    def check_health(self) -> None:
        try:
            response = requests.get(f"{self.base_url}/healthz", timeout=self.timeout)
        except requests.RequestException as exc:
            raise BackendUnavailable(f"classifier health check failed: {exc}") from exc
        if response.status_code != 200:
            raise BackendUnavailable(
                f"classifier health check returned {response.status_code}"
            )

    def score_texts(self, texts: Sequence[str]) -> list[float]:
        try:
            response = requests.post(
                f"{self.base_url}/classify", json={"texts": list(texts)}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise BackendUnavailable(f"classifier request failed: {exc}") from exc
        if response.status_code != 200:
            raise BackendUnavailable(f"classifier returned {response.status_code}")
        try:
            scores = response.json()["scores"]
        except (ValueError, KeyError) as exc:
            raise BackendUnavailable(f"classifier response malformed: {exc}") from exc
        if len(scores) != len(texts):
            raise BackendUnavailable(
                f"classifier returned {len(scores)} scores for {len(texts)} texts"
            )
        if any(not (0.0 <= s <= 1.0) for s in scores):
            raise BackendUnavailable("classifier scores out of [0, 1]")
        return [float(s) for s in scores]


def classify_corpus(
    scorer: Scorer,
    bundles: Mapping[str, TextBundle],
    records: Sequence[VideoRecord],
    variant: DatasetVariant,
) -> list[RelevanceVerdict]:
    """One verdict per record, in sorted record-id order. Backend failures
    abort the whole batch; there is no partial output."""
    ordered = sorted(records, key=lambda r: r.id)
    texts = [
        assemble_text(bundles.get(r.id) or empty_bundle(r.id), r, variant) for r in ordered
    ]
    if not texts:
        return []
    scores = scorer.score_texts(texts)
    return [
        RelevanceVerdict(
            record_id=record.id,
            label=Label.RELEVANT if score >= DECISION_THRESHOLD else Label.IRRELEVANT,
            score=float(score),
            model_id=scorer.model_id,
        )
        for record, score in zip(ordered, scores)
    ]


def write_verdicts(verdicts: Sequence[RelevanceVerdict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for verdict in verdicts:
            fh.write(json.dumps(verdict.to_dict(), sort_keys=True) + "\n")


def read_verdicts(path) -> list[RelevanceVerdict]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            raw = json.loads(line)
            out.append(
                RelevanceVerdict(
                    record_id=raw["record_id"],
                    label=Label(raw["label"]),
                    score=float(raw["score"]),
                    model_id=raw["model_id"],
                )
            )
    return out
