"""Univariate F-score feature selection."""

from __future__ import annotations

import math

import numpy as np

PERCENTILES = (3, 5, 10, 25, 50, 75, 100)
_BIG = float(np.finfo(float).max)


def f_classif(X, y) -> np.ndarray:
    """One-way ANOVA F statistic of each column against class labels.

    Constant columns score 0; columns with zero within-class spread but
    distinct class means get the largest finite float.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    classes = np.unique(y)
    n, k = len(y), len(classes)
    grand = X.mean(axis=0)
    between = np.zeros(X.shape[1])
    within = np.zeros(X.shape[1])
    for c in classes:
        g = X[y == c]
        mu = g.mean(axis=0)
        between += len(g) * (mu - grand) ** 2
        within += ((g - mu) ** 2).sum(axis=0)
    df_b, df_w = k - 1, n - k
    scores = np.zeros(X.shape[1])
    if df_b <= 0 or df_w <= 0:
        return scores
    tiny = 1e-12 * np.maximum(1.0, (X ** 2).sum(axis=0))
    ok = within > tiny
    scores[ok] = (between[ok] / df_b) / (within[ok] / df_w)
    scores[~ok & (between > tiny)] = _BIG
    return scores


def f_regression(X, y) -> np.ndarray:
    """F statistic of the univariate linear fit of ``y`` on each column."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    xc = X - X.mean(axis=0)
    yc = y - y.mean()
    sx = np.sqrt((xc ** 2).sum(axis=0))
    sy = math.sqrt(float(yc @ yc))
    scores = np.zeros(X.shape[1])
    if sy == 0 or n < 3:
        return scores
    ok = sx > 1e-12 * np.maximum(1.0, np.abs(X).max(axis=0))
    r = np.zeros(X.shape[1])
    r[ok] = (xc[:, ok].T @ yc) / (sx[ok] * sy)
    r2 = np.clip(r ** 2, 0.0, 1.0)
    perfect = ok & (r2 >= 1.0 - 1e-15)
    regular = ok & ~perfect
    scores[regular] = r2[regular] / (1.0 - r2[regular]) * (n - 2)
    scores[perfect] = _BIG
    return scores


def n_selected(n_features: int, amount: float, mode: str = "percentile") -> int:
    if n_features == 0:
        return 0
    if mode == "percentile":
        if not 0 < amount <= 100:
            raise ValueError(f"percentile must be in (0, 100], got {amount}")
        return max(1, math.ceil(amount / 100.0 * n_features - 1e-9))
    if mode == "k":
        return max(1, min(int(amount), n_features))
    raise ValueError(f"unknown selection mode {mode!r}")


def mask_from_scores(scores: np.ndarray, keep: int) -> np.ndarray:
    """Keep the ``keep`` highest scores; ties go to the lower column index."""
    order = sorted(range(len(scores)), key=lambda j: (-scores[j], j))
    mask = np.zeros(len(scores), dtype=bool)
    mask[order[:keep]] = True
    return mask


def select_percentile(X, y, percentile: float = 100, *, regression: bool = False,
                      mode: str = "percentile") -> tuple[np.ndarray, np.ndarray]:
    """Boolean mask of the top-scoring columns plus the scores themselves.

    ``mode="k"`` reads ``percentile`` as an absolute column count instead.
    """
    scores = f_regression(X, y) if regression else f_classif(X, y)
    keep = n_selected(len(scores), percentile, mode)
    if mode == "percentile" and percentile >= 100:
        return np.ones(len(scores), dtype=bool), scores
    return mask_from_scores(scores, keep), scores
