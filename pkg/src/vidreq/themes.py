"""Per-product theme clustering of relevant records.

Documents are embedded (external backend over HTTP, or a deterministic
TF-IDF random-projection fallback), clustered with seeded k-means for k in
[2, 6], and the k with the best mean silhouette wins (ties prefer the
smaller k). Clusters are described by class-based TF-IDF term scores; theme
names are always human-assigned.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Sequence

import numpy as np
import requests

from .errors import (
    BackendUnavailable,
    EmptyCluster,
    EmptyCorpus,
    KExceedsN,
    SingleCluster,
    TooFewDocuments,
)
from .textutil import english_stopwords, fit_tfidf_vocab, tfidf_matrix, tokenize

FALLBACK_DIM = 128
K_RANGE = (2, 6)
N_RESTARTS = 10
CENTER_SHIFT_TOL = 1e-6
MAX_ITERATIONS = 300
TOP_TERMS = 10


class EmbeddingSource(str, Enum):
    FALLBACK = "Fallback"
    EXTERNAL = "External"


@dataclass(frozen=True)
class EmbeddingMatrix:
    record_ids: tuple[str, ...]
    vectors: np.ndarray
    source: EmbeddingSource

    def __post_init__(self):
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.record_ids):
            raise ValueError("vectors must be one row per record id")
        if not np.isfinite(self.vectors).all():
            raise ValueError("embedding vectors must be finite")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class ThemeCluster:
    cluster_id: int
    record_ids: tuple[str, ...]
    top_terms: tuple[tuple[str, float], ...]
    product: str
    theme_name: str | None = None


@dataclass(frozen=True)
class ClusteringRun:
    product: str
    k_tried: tuple[int, ...]
    silhouettes: Mapping[int, float]
    chosen_k: int
    seed: int


def embed_fallback(
    texts: Sequence[str], seed: int, record_ids: Sequence[str] | None = None
) -> EmbeddingMatrix:
    """TF-IDF vectors projected to a fixed dimension by a seeded Gaussian
    random projection, rows L2-normalized. Deterministic given seed."""
    if not texts:
        raise EmptyCorpus("cannot embed an empty corpus")
    if record_ids is None:
        record_ids = [str(i) for i in range(len(texts))]
    vocab, idf = fit_tfidf_vocab(list(texts), min_df=1)
    base = tfidf_matrix(list(texts), vocab, idf)
    rng = np.random.default_rng(seed)
    projection = rng.standard_normal((max(len(vocab), 1), FALLBACK_DIM)) / math.sqrt(
        FALLBACK_DIM
    )
    vectors = base @ projection if vocab else np.zeros((len(texts), FALLBACK_DIM))
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    vectors = np.divide(vectors, norms, out=vectors, where=norms > 0)
    return EmbeddingMatrix(
        record_ids=tuple(record_ids), vectors=vectors, source=EmbeddingSource.FALLBACK
    )


class HttpEmbedder:
    """Client for the embedding backend contract: POST {base}/embed with
    {"texts": [...]} returns {"vectors": [[...], ...]} of fixed width."""

    def __init__(self, base_url: str, timeout: float = 60.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def embed(self, texts: Sequence[str], record_ids: Sequence[str]) -> EmbeddingMatrix:
        try:
            response = requests.post(
                f"{self.base_url}/embed", json={"texts": list(texts)}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise BackendUnavailable(f"embedder request failed: {exc}") from exc
        if response.status_code != 200:
            raise BackendUnavailable(f"embedder returned {response.status_code}")
        try:
            vectors = response.json()["vectors"]
        except (ValueError, KeyError) as exc:
            raise BackendUnavailable(f"embedder response malformed: {exc}") from exc
        if len(vectors) != len(texts):
            raise BackendUnavailable(
                f"embedder returned {len(vectors)} vectors for {len(texts)} texts"
            )
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or not np.isfinite(arr).all():
            raise BackendUnavailable("embedder vectors must be a finite 2-D array")
        return EmbeddingMatrix(
            record_ids=tuple(record_ids), vectors=arr, source=EmbeddingSource.EXTERNAL
        )


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total > 0:
            probs = d2 / total
            idx = rng.choice(n, p=probs)
        else:
            idx = rng.integers(n)
        centers[i] = X[idx]
        d2 = np.minimum(d2, ((X - centers[i]) ** 2).sum(axis=1))
    return centers


def _lloyd(
    X: np.ndarray, k: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, float]:
    n = X.shape[0]
    centers = _kmeans_pp_init(X, k, rng)
    previous_inertia = np.inf
    assignment = np.zeros(n, dtype=int)
    for _ in range(MAX_ITERATIONS):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assignment = d2.argmin(axis=1)
        for c in range(k):
            if (assignment == c).any():
                continue
            # reseed the empty cluster from the farthest point of any
            # multi-member cluster (singletons cannot donate)
            counts = np.bincount(assignment, minlength=k)
            contribution = d2[np.arange(n), assignment].copy()
            contribution[counts[assignment] <= 1] = -1.0
            farthest = int(contribution.argmax())
            centers[c] = X[farthest]
            assignment[farthest] = c
            d2[:, c] = ((X - centers[c]) ** 2).sum(axis=1)
        inertia = float(d2[np.arange(n), assignment].sum())
        # Lloyd steps and reseeds can only lower the objective
        assert inertia <= previous_inertia + 1e-9 * max(1.0, min(previous_inertia, 1e12)), (
            "Lloyd iteration increased inertia"
        )
        previous_inertia = inertia
        new_centers = np.stack([X[assignment == c].mean(axis=0) for c in range(k)])
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        centers = new_centers
        if shift < CENTER_SHIFT_TOL:
            break
    inertia = float(((X - centers[assignment]) ** 2).sum())
    return assignment, centers, inertia


def kmeans(
    matrix: EmbeddingMatrix | np.ndarray, k: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded k-means++ with Lloyd iterations, best of 10 restarts by inertia."""
    X = matrix.vectors if isinstance(matrix, EmbeddingMatrix) else np.asarray(matrix)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if k > n:
        raise KExceedsN(f"k={k} exceeds {n} points")
    if k < 1:
        raise ValueError("k must be >= 1")
    best: tuple[float, np.ndarray, np.ndarray] | None = None
    for restart in range(N_RESTARTS):
        rng = np.random.default_rng([seed, restart])
        assignment, centers, inertia = _lloyd(X, k, rng)
        if best is None or inertia < best[0]:
            best = (inertia, assignment, centers)
    return best[1], best[2]


def silhouette(matrix: EmbeddingMatrix | np.ndarray, assignment: Sequence[int]) -> float:
    """Mean silhouette with Euclidean distances; singletons contribute 0."""
    X = matrix.vectors if isinstance(matrix, EmbeddingMatrix) else np.asarray(matrix)
    if X.ndim == 1:
        X = X[:, None]
    assignment = np.asarray(assignment)
    labels = np.unique(assignment)
    if len(labels) < 2:
        raise SingleCluster("silhouette needs at least two non-empty clusters")
    diff = X[:, None, :] - X[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    scores = np.zeros(len(X))
    for i in range(len(X)):
        own = assignment[i]
        own_mask = assignment == own
        own_size = int(own_mask.sum())
        if own_size == 1:
            scores[i] = 0.0
            continue
        a = dist[i, own_mask].sum() / (own_size - 1)
        b = min(
            dist[i, assignment == other].mean() for other in labels if other != own
        )
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


def select_k(
    matrix: EmbeddingMatrix,
    seed: int,
    k_min: int = K_RANGE[0],
    k_max: int = K_RANGE[1],
    product: str = "",
) -> tuple[ClusteringRun, np.ndarray]:
    """Try each k, keep the best mean silhouette; ties choose the smaller k."""
    n = len(matrix.record_ids)
    if n < 3:
        raise TooFewDocuments(f"need at least 3 documents to cluster, got {n}")
    k_max = min(k_max, n - 1)
    silhouettes: dict[int, float] = {}
    assignments: dict[int, np.ndarray] = {}
    for k in range(k_min, k_max + 1):
        assignment, _ = kmeans(matrix, k, seed)
        silhouettes[k] = silhouette(matrix, assignment)
        assignments[k] = assignment
    chosen_k = k_min
    for k in sorted(silhouettes):
        if silhouettes[k] > silhouettes[chosen_k]:
            chosen_k = k
    run = ClusteringRun(
        product=product,
        k_tried=tuple(sorted(silhouettes)),
        silhouettes=dict(silhouettes),
        chosen_k=chosen_k,
        seed=seed,
    )
    return run, assignments[chosen_k]


def class_term_scores(
    cluster_docs: Mapping[int, Sequence[str]]
) -> dict[int, list[tuple[str, float]]]:
    """Class-based TF-IDF descriptors, top 10 terms per cluster.

    score(t, c) = tf(t, c) * ln(1 + A / f_mean(t)) where A is the mean token
    count per cluster and f_mean(t) the mean per-cluster frequency of t; the
    ratio A / f_mean(t) equals total_tokens / total_frequency(t).
    """
    if not cluster_docs:
        raise EmptyCluster("no clusters given")
    for cluster, tokens in cluster_docs.items():
        if len(tokens) == 0:
            raise EmptyCluster(f"cluster {cluster} has no tokens")
    total_tokens = sum(len(tokens) for tokens in cluster_docs.values())
    frequency: dict[str, int] = {}
    per_cluster: dict[int, dict[str, int]] = {}
    for cluster, tokens in cluster_docs.items():
        counts: dict[str, int] = {}
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
            frequency[token] = frequency.get(token, 0) + 1
        per_cluster[cluster] = counts
    out: dict[int, list[tuple[str, float]]] = {}
    for cluster, counts in per_cluster.items():
        scored = [
            (term, tf * math.log(1.0 + total_tokens / frequency[term]))
            for term, tf in counts.items()
        ]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        out[cluster] = scored[:TOP_TERMS]
    return out


def cluster_product(
    product: str,
    record_ids: Sequence[str],
    texts: Sequence[str],
    seed: int,
    embedder: HttpEmbedder | None = None,
    k_min: int = K_RANGE[0],
    k_max: int = K_RANGE[1],
) -> tuple[ClusteringRun, list[ThemeCluster]]:
    """Full per-product clustering: embed, select k, describe clusters.

    Record ids are sorted first so results are independent of input order.
    """
    order = sorted(range(len(record_ids)), key=lambda i: record_ids[i])
    ids = [record_ids[i] for i in order]
    docs = [texts[i] for i in order]
    if embedder is None:
        matrix = embed_fallback(docs, seed, record_ids=ids)
    else:
        matrix = embedder.embed(docs, record_ids=ids)
    run, assignment = select_k(matrix, seed, k_min=k_min, k_max=k_max, product=product)
    # descriptor bags exclude stopwords so top terms describe content
    stopwords = english_stopwords()
    cluster_docs = {
        c: [
            t
            for i in range(len(ids))
            if assignment[i] == c
            for t in tokenize(docs[i])
            if t not in stopwords
        ]
        for c in sorted(set(int(a) for a in assignment))
    }
    # guard: a cluster whose docs are all empty still needs a descriptor row
    scores = class_term_scores({c: d for c, d in cluster_docs.items() if d})
    clusters = []
    for c in sorted(cluster_docs):
        members = tuple(ids[i] for i in range(len(ids)) if assignment[i] == c)
        clusters.append(
            ThemeCluster(
                cluster_id=c,
                record_ids=members,
                top_terms=tuple(scores.get(c, [])),
                product=product,
            )
        )
    return run, clusters


def with_names(
    clusters: Sequence[ThemeCluster], names: Mapping[tuple[str, int], str]
) -> list[ThemeCluster]:
    return [
        replace(c, theme_name=names.get((c.product, c.cluster_id), c.theme_name))
        for c in clusters
    ]


def build_theme_report(
    runs: Sequence[ClusteringRun],
    clusters: Sequence[ThemeCluster],
    names: Mapping[tuple[str, int], str],
) -> dict:
    """Per-product cluster listing plus a cross-product rollup that counts
    products per theme name (case-folded exact match)."""
    named = with_names(clusters, names)
    products: dict[str, dict] = {}
    for run in sorted(runs, key=lambda r: r.product):
        products[run.product] = {
            "product": run.product,
            "chosen_k": run.chosen_k,
            "k_tried": list(run.k_tried),
            "silhouettes": {str(k): run.silhouettes[k] for k in run.k_tried},
            "seed": run.seed,
            "clusters": [],
        }
    for cluster in sorted(named, key=lambda c: (c.product, c.cluster_id)):
        entry = products.setdefault(
            cluster.product, {"product": cluster.product, "clusters": []}
        )
        entry["clusters"].append(
            {
                "cluster_id": cluster.cluster_id,
                "size": len(cluster.record_ids),
                "record_ids": list(cluster.record_ids),
                "top_terms": [[t, s] for t, s in cluster.top_terms],
                "theme_name": cluster.theme_name or "(unnamed)",
            }
        )
    theme_products: dict[str, set[str]] = {}
    display: dict[str, str] = {}
    for cluster in named:
        if not cluster.theme_name:
            continue
        key = cluster.theme_name.casefold()
        theme_products.setdefault(key, set()).add(cluster.product)
        display.setdefault(key, cluster.theme_name)
    rollup = [
        {"theme": key, "display_name": display[key], "product_count": len(prods)}
        for key, prods in theme_products.items()
    ]
    rollup.sort(key=lambda row: (-row["product_count"], row["theme"]))
    return {"products": list(products.values()), "rollup": rollup}


def product_artifact(run: ClusteringRun, clusters: Sequence[ThemeCluster]) -> dict:
    return {
        "product": run.product,
        "seed": run.seed,
        "k_tried": list(run.k_tried),
        "silhouettes": {str(k): run.silhouettes[k] for k in run.k_tried},
        "chosen_k": run.chosen_k,
        "clusters": [
            {
                "cluster_id": c.cluster_id,
                "record_ids": list(c.record_ids),
                "top_terms": [[t, s] for t, s in c.top_terms],
                "theme_name": c.theme_name,
            }
            for c in clusters
        ],
    }


def load_product_artifact(path) -> tuple[ClusteringRun, list[ThemeCluster]]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    run = ClusteringRun(
        product=raw["product"],
        k_tried=tuple(raw["k_tried"]),
        silhouettes={int(k): float(v) for k, v in raw["silhouettes"].items()},
        chosen_k=int(raw["chosen_k"]),
        seed=int(raw["seed"]),
    )
    clusters = [
        ThemeCluster(
            cluster_id=int(c["cluster_id"]),
            record_ids=tuple(c["record_ids"]),
            top_terms=tuple((t, float(s)) for t, s in c["top_terms"]),
            product=raw["product"],
            theme_name=c.get("theme_name"),
        )
        for c in raw["clusters"]
    ]
    return run, clusters
