"""Appending tag-classifier class probabilities to lexical features."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..vector import FeatureVector

PROB_PREFIX = "html2seq_prob_"


class LeakageError(RuntimeError):
    pass


@dataclass(frozen=True)
class TagProbs:
    """Class probabilities for one page from a tag-window classifier.

    ``trained_on`` lists the fold ids whose rows were used to train the
    classifier that produced these probabilities.
    """

    probs: np.ndarray
    classes: tuple[str, ...]
    trained_on: frozenset[int] = frozenset()


def stack_features(lexical: FeatureVector, tag_probs: TagProbs, eval_fold: int | None = None) -> FeatureVector:
    if eval_fold is not None and eval_fold in tag_probs.trained_on:
        raise LeakageError(f"tag probabilities were trained on evaluation fold {eval_fold}")
    probs = np.asarray(tag_probs.probs, dtype=float)
    if len(probs) != len(tag_probs.classes):
        raise ValueError("one probability per class expected")
    names = tuple(f"{PROB_PREFIX}{c}" for c in tag_probs.classes)
    return FeatureVector(np.concatenate([lexical.values, probs]), lexical.schema + names,
                         lexical.notes)


def out_of_fold_probs(model_factory, X, y, folds: np.ndarray) -> tuple[np.ndarray, list]:
    """Probabilities for every row from a model that never saw that row's fold.

    Returns ``(probs, classes)`` with columns in sorted class order.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    classes = sorted(set(y.tolist()))
    probs = np.zeros((len(y), len(classes)))
    for f in np.unique(folds):
        test = folds == f
        train_y = y[~test]
        if len(set(train_y.tolist())) < 2:
            counts = np.bincount([classes.index(v) for v in train_y], minlength=len(classes))
            probs[test] = counts / counts.sum()
            continue
        model = model_factory().fit(X[~test], train_y)
        cols = [classes.index(c) for c in model.classes_.tolist()]
        probs[np.ix_(test, cols)] = model.predict_proba(X[test])
    return probs, classes


def stack_matrix(lexical: np.ndarray, schema: Sequence[str], probs: np.ndarray,
                 classes: Sequence[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    names = tuple(schema) + tuple(f"{PROB_PREFIX}{c}" for c in classes)
    return np.hstack([np.asarray(lexical, dtype=float), probs]), names
