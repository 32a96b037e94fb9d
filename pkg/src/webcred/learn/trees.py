"""Exact greedy trees used by the boosting ensembles.

Split ties resolve to the lowest feature index, then the lowest threshold.
Thresholds are midpoints between consecutive distinct values; a sample goes
left when ``x[feature] <= threshold``.
"""

from __future__ import annotations

import numpy as np

_REL_TOL = 1e-12


class RegressionTree:
    """Least-squares regression tree grown depth-first to ``max_depth``."""

    def __init__(self, max_depth: int = 3, min_samples_split: int = 2):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RegressionTree":
        self._feature: list[int] = []
        self._threshold: list[float] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._value: list[float] = []
        self._grow(X, y, np.arange(len(y)), 0)
        self.feature = np.array(self._feature, dtype=np.int64)
        self.threshold = np.array(self._threshold, dtype=float)
        self.left = np.array(self._left, dtype=np.int64)
        self.right = np.array(self._right, dtype=np.int64)
        self.value = np.array(self._value, dtype=float)
        del self._feature, self._threshold, self._left, self._right, self._value
        return self

    def _new_node(self, value: float) -> int:
        self._feature.append(-1)
        self._threshold.append(0.0)
        self._left.append(-1)
        self._right.append(-1)
        self._value.append(value)
        return len(self._value) - 1

    def _grow(self, X, y, idx, depth) -> int:
        node = self._new_node(float(y[idx].mean()))
        if depth >= self.max_depth or len(idx) < self.min_samples_split:
            return node
        split = best_sse_split(X[idx], y[idx])
        if split is None:
            return node
        j, thr = split
        go_left = X[idx, j] <= thr
        self._feature[node] = j
        self._threshold[node] = thr
        left = self._grow(X, y, idx[go_left], depth + 1)
        right = self._grow(X, y, idx[~go_left], depth + 1)
        self._left[node], self._right[node] = left, right
        return node

    def apply(self, X: np.ndarray) -> np.ndarray:
        nodes = np.zeros(len(X), dtype=np.int64)
        active = self.feature[nodes] >= 0
        while active.any():
            rows = np.nonzero(active)[0]
            n = nodes[rows]
            go_left = X[rows, self.feature[n]] <= self.threshold[n]
            nodes[rows] = np.where(go_left, self.left[n], self.right[n])
            active = self.feature[nodes] >= 0
        return nodes

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(np.asarray(X, dtype=float))]

    def get_arrays(self) -> dict:
        return {"feature": self.feature, "threshold": self.threshold, "left": self.left,
                "right": self.right, "value": self.value}

    @classmethod
    def from_arrays(cls, arrays: dict, max_depth: int = 3) -> "RegressionTree":
        t = cls(max_depth)
        for k, v in arrays.items():
            setattr(t, k, np.asarray(v))
        return t


def best_sse_split(X: np.ndarray, y: np.ndarray):
    """(feature, threshold) maximizing the squared-error reduction, or None."""
    n, d = X.shape
    total = y.sum()
    base = total * total / n
    best_gain, best = 0.0, None
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs, ys = X[order, j], y[order]
        valid = xs[:-1] < xs[1:]
        if not valid.any():
            continue
        left_sum = np.cumsum(ys)[:-1]
        n_left = np.arange(1, n)
        right_sum = total - left_sum
        gain = left_sum ** 2 / n_left + right_sum ** 2 / (n - n_left) - base
        gain = np.where(valid, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] > best_gain + _REL_TOL * max(1.0, abs(best_gain)):
            best_gain = float(gain[i])
            best = (j, float((xs[i] + xs[i + 1]) / 2.0))
    return best


class DecisionStump:
    """One-split classifier minimizing weighted misclassification.

    ``classes`` are integer codes ``0..K-1``; each leaf predicts its
    weighted-majority class (lowest code on ties).
    """

    def __init__(self, feature: int = -1, threshold: float = np.inf, left: int = 0, right: int = 0):
        self.feature, self.threshold, self.left, self.right = feature, threshold, left, right

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, w: np.ndarray, n_classes: int) -> tuple["DecisionStump", float]:
        n, d = X.shape
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), y] = w
        totals = onehot.sum(axis=0)
        total_w = totals.sum()
        const = int(np.argmax(totals))
        best_err = total_w - totals[const]
        best = cls(-1, np.inf, const, const)
        for j in range(d):
            order = np.argsort(X[:, j], kind="stable")
            xs = X[order, j]
            valid = xs[:-1] < xs[1:]
            if not valid.any():
                continue
            left = np.cumsum(onehot[order], axis=0)[:-1]
            right = totals - left
            err = total_w - left.max(axis=1) - right.max(axis=1)
            err = np.where(valid, err, np.inf)
            i = int(np.argmin(err))
            if err[i] < best_err - _REL_TOL * max(1.0, total_w):
                best_err = float(err[i])
                best = cls(j, float((xs[i] + xs[i + 1]) / 2.0),
                           int(np.argmax(left[i])), int(np.argmax(right[i])))
        return best, float(max(best_err, 0.0) / total_w)

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self.feature < 0:
            return np.full(len(X), self.left, dtype=np.int64)
        return np.where(X[:, self.feature] <= self.threshold, self.left, self.right)

    def as_row(self) -> list[float]:
        return [self.feature, self.threshold, self.left, self.right]
