"""Word tokenization, TF-IDF and the two extractive sentence rankers."""

from __future__ import annotations

import re
from collections import Counter
from typing import Sequence

import numpy as np

_WORD = re.compile(r"[a-z0-9]+(?:'[a-z]+)?")

LEXRANK_THRESHOLD = 0.1
LEXRANK_DAMPING = 0.85
LEXRANK_TOL = 1e-6
LEXRANK_MAX_ITER = 200


def words(text: str) -> list[str]:
    return _WORD.findall(text.lower())


def tfidf_matrix(sentences: Sequence[str]) -> tuple[np.ndarray, list[str]]:
    """Sentence-by-term TF-IDF with raw term counts and smoothed idf.

    idf(t) = ln((1 + n) / (1 + df(t))) + 1, so terms shared by every
    sentence keep a positive weight.
    """
    tokenized = [Counter(words(s)) for s in sentences]
    vocab = sorted(set().union(*tokenized)) if tokenized else []
    col = {t: j for j, t in enumerate(vocab)}
    tf = np.zeros((len(sentences), len(vocab)))
    for i, counts in enumerate(tokenized):
        for t, c in counts.items():
            tf[i, col[t]] = c
    n = len(sentences)
    df = (tf > 0).sum(axis=0)
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    return tf * idf, vocab


def cosine_similarity(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = m / safe[:, None]
    sim = unit @ unit.T
    sim[norms == 0, :] = 0.0
    sim[:, norms == 0] = 0.0
    return sim


def lexrank_transition(sentences: Sequence[str], threshold: float = LEXRANK_THRESHOLD) -> np.ndarray:
    """Row-stochastic matrix of the thresholded similarity graph.

    Edges join distinct sentences whose cosine similarity is at least
    ``threshold``. Sentences with no edge jump uniformly.
    """
    n = len(sentences)
    m, _ = tfidf_matrix(sentences)
    adj = (cosine_similarity(m) >= threshold).astype(float)
    np.fill_diagonal(adj, 0.0)
    deg = adj.sum(axis=1)
    trans = np.full((n, n), 1.0 / n) if n else np.zeros((0, 0))
    linked = deg > 0
    trans[linked] = adj[linked] / deg[linked, None]
    return trans


def lexrank_scores(
    sentences: Sequence[str],
    threshold: float = LEXRANK_THRESHOLD,
    damping: float = LEXRANK_DAMPING,
    tol: float = LEXRANK_TOL,
    max_iter: int = LEXRANK_MAX_ITER,
) -> np.ndarray:
    """Damped eigenvector centrality of each sentence, summing to 1.

    Power iteration stops once the step size guarantees the iterate lies
    within ``tol`` (L1) of the fixed point, i.e. when
    ``step * damping / (1 - damping) < tol``.
    """
    n = len(sentences)
    if n == 0:
        return np.zeros(0)
    trans = lexrank_transition(sentences, threshold)
    p = np.full(n, 1.0 / n)
    bound = damping / (1.0 - damping)
    for _ in range(max_iter):
        nxt = (1.0 - damping) / n + damping * (trans.T @ p)
        step = np.abs(nxt - p).sum()
        p = nxt
        if step * bound < tol:
            break
    return p / p.sum()


def _rank(scores: np.ndarray, n_top: int) -> list[int]:
    if n_top < 1:
        raise ValueError("N must be >= 1")
    # rounding makes float noise between symmetric sentences a true tie
    keys = np.round(scores, 12)
    order = sorted(range(len(scores)), key=lambda i: (-keys[i], i))
    return order[:n_top]


def lexrank_top(sentences: Sequence[str], n_top: int) -> list[int]:
    """Indices of the ``n_top`` most central sentences, best first."""
    return _rank(lexrank_scores(sentences), n_top)


def lsa_scores(sentences: Sequence[str], max_topics: int = 3) -> np.ndarray:
    """Sentence salience from a truncated SVD of the term-by-sentence matrix.

    score(s) = sqrt(sum_k (sigma_k * v_ks)^2) over the first
    ``min(max_topics, rank)`` singular triplets.
    """
    if not sentences:
        return np.zeros(0)
    a = tfidf_matrix(sentences)[0].T
    if a.size == 0:
        return np.zeros(len(sentences))
    _, sigma, vt = np.linalg.svd(a, full_matrices=False)
    rank = int(np.linalg.matrix_rank(a))
    k = min(max_topics, rank)
    weighted = sigma[:k, None] * vt[:k]
    return np.sqrt((weighted ** 2).sum(axis=0))


def lsa_top(sentences: Sequence[str], n_top: int) -> list[int]:
    return _rank(lsa_scores(sentences), n_top)
