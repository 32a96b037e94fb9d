from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

import numpy as np

from ..text import words

ALPHA_FLOOR = 1e-9


class DegenerateLabels(ValueError):
    pass


class MultinomialNB:
    """Multinomial naive Bayes over nonnegative count features.

    Priors are empirical class frequencies; likelihoods use additive
    (Laplace/Lidstone) smoothing ``(N_cw + alpha) / (N_c + alpha * |V|)``.
    """

    kind = "nb"

    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        if X.ndim != 2 or len(X) != len(y):
            raise ValueError("X must be 2-D with one row per label")
        if (X < 0).any():
            raise ValueError("multinomial NB needs nonnegative features")
        self.classes_ = np.unique(y)
        if len(self.classes_) < 2:
            raise DegenerateLabels("need at least two classes")
        alpha = max(self.alpha, ALPHA_FLOOR)
        counts = np.stack([X[y == c].sum(axis=0) for c in self.classes_])
        self.class_log_prior_ = np.log(np.array([(y == c).mean() for c in self.classes_]))
        smoothed = counts + alpha
        self.feature_log_prob_ = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ self.feature_log_prob_.T + self.class_log_prior_

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.joint_log_likelihood(X), axis=1)]

    def get_state(self) -> dict:
        return {
            "params": {"alpha": self.alpha},
            "arrays": {"classes": self.classes_, "log_prior": self.class_log_prior_,
                       "log_prob": self.feature_log_prob_},
        }

    @classmethod
    def from_state(cls, state: dict) -> "MultinomialNB":
        m = cls(**state["params"])
        a = state["arrays"]
        m.classes_, m.class_log_prior_, m.feature_log_prob_ = a["classes"], a["log_prior"], a["log_prob"]
        return m


class TextVocabulary:
    """Sorted word vocabulary mapping texts to count vectors."""

    def __init__(self, terms: Iterable[str]):
        self.terms = sorted(set(terms))
        self.index = {t: i for i, t in enumerate(self.terms)}

    @classmethod
    def from_texts(cls, texts: Iterable[str]) -> "TextVocabulary":
        return cls(t for text in texts for t in words(text))

    def __len__(self):
        return len(self.terms)

    def counts(self, text: str) -> np.ndarray:
        v = np.zeros(len(self.terms))
        for t, c in Counter(words(text)).items():
            j = self.index.get(t)
            if j is not None:
                v[j] = c
        return v

    def matrix(self, texts: Sequence[str]) -> np.ndarray:
        return np.stack([self.counts(t) for t in texts]) if texts else np.zeros((0, len(self)))


class BinaryTextNB:
    """One-vs-rest text classifier returning P(positive | text)."""

    def __init__(self, vocab: TextVocabulary, texts: Sequence[str], positive: Sequence[bool],
                 alpha: float = 1.0):
        self.vocab = vocab
        self.model = MultinomialNB(alpha).fit(vocab.matrix(texts), np.asarray(positive, dtype=int))

    def prob(self, text: str) -> float:
        return float(self.model.predict_proba(self.vocab.counts(text))[0, 1])
