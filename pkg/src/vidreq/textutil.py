"""Shared text primitives: the repo-wide tokenizer and a small TF-IDF.

There is exactly one definition of "word" in this codebase: a case-folded
unicode word token produced by :func:`tokenize`. The classifier, the
embeddings, the language heuristic, and the content statistics all use it.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

import numpy as np

_WORD_RE = re.compile(r"\w+")


def tokenize(text: str) -> list[str]:
    """Case-folded unicode word tokens, in order of appearance."""
    return _WORD_RE.findall(text.casefold())


@lru_cache(maxsize=1)
def english_stopwords() -> frozenset[str]:
    """Bundled ~150-word English stopword list."""
    raw = resources.files("vidreq.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip() for w in raw.splitlines() if w.strip())


def fit_tfidf_vocab(docs: list[str], min_df: int = 1) -> tuple[list[str], np.ndarray]:
    """Build a TF-IDF vocabulary over `docs`.

    Returns (vocab, idf) where vocab is the sorted list of tokens with
    document frequency >= min_df and idf[i] = ln((1 + N) / (1 + df_i)) + 1.
    """
    df: dict[str, int] = {}
    for doc in docs:
        for tok in set(tokenize(doc)):
            df[tok] = df.get(tok, 0) + 1
    vocab = sorted(t for t, n in df.items() if n >= min_df)
    n_docs = len(docs)
    idf = np.array(
        [np.log((1.0 + n_docs) / (1.0 + df[t])) + 1.0 for t in vocab], dtype=np.float64
    )
    return vocab, idf


def tfidf_matrix(docs: list[str], vocab: list[str], idf: np.ndarray) -> np.ndarray:
    """Dense L2-normalized TF-IDF row per document (corpora here are small)."""
    index = {t: i for i, t in enumerate(vocab)}
    mat = np.zeros((len(docs), len(vocab)), dtype=np.float64)
    for r, doc in enumerate(docs):
        for tok in tokenize(doc):
            i = index.get(tok)
            if i is not None:
                mat[r, i] += 1.0
    mat *= idf
    norms = np.linalg.norm(mat, axis=1, keepdims=True)
    np.divide(mat, norms, out=mat, where=norms > 0)
    return mat
