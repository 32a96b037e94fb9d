from __future__ import annotations

import math

import numpy as np

from .naive_bayes import DegenerateLabels
from .trees import DecisionStump, RegressionTree

MAX_ALPHA = math.log(1e9)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=float)))


def _encode(y):
    classes, codes = np.unique(np.asarray(y), return_inverse=True)
    return classes, codes


class AdaBoost:
    """SAMME boosting of decision stumps.

    Each round fits the stump with the lowest weighted error and weights it
    by ``ln((1 - err) / err) + ln(K - 1)``. A perfect stump gets the capped
    weight ``ln(1e9)`` and ends training. With two classes the positive-class
    probability is the logistic of the vote margin.
    """

    kind = "adaboost"

    def __init__(self, n_rounds: int = 50):
        self.n_rounds = n_rounds

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        self.classes_, codes = _encode(y)
        k = len(self.classes_)
        if k < 2:
            raise DegenerateLabels("AdaBoost needs at least two classes")
        w = np.full(len(codes), 1.0 / len(codes))
        self.stumps: list[DecisionStump] = []
        self.alphas: list[float] = []
        for _ in range(self.n_rounds):
            stump, err = DecisionStump.fit(X, codes, w, k)
            if err >= 1.0 - 1.0 / k:
                break
            if err <= 0.0:
                self.stumps.append(stump)
                self.alphas.append(MAX_ALPHA)
                break
            alpha = min(math.log((1.0 - err) / err) + math.log(k - 1), MAX_ALPHA)
            self.stumps.append(stump)
            self.alphas.append(alpha)
            miss = stump.predict(X) != codes
            w = w * np.exp(alpha * miss)
            w /= w.sum()
        return self

    def votes(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        v = np.zeros((len(X), len(self.classes_)))
        for stump, alpha in zip(self.stumps, self.alphas):
            v[np.arange(len(X)), stump.predict(X)] += alpha
        return v

    def predict_proba(self, X) -> np.ndarray:
        v = self.votes(X)
        v -= v.max(axis=1, keepdims=True)
        e = np.exp(v)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.votes(X), axis=1)]

    def get_state(self) -> dict:
        return {
            "params": {"n_rounds": self.n_rounds},
            "arrays": {
                "classes": self.classes_,
                "stumps": np.array([s.as_row() for s in self.stumps], dtype=float).reshape(-1, 4),
                "alphas": np.array(self.alphas, dtype=float),
            },
        }

    @classmethod
    def from_state(cls, state):
        m = cls(**state["params"])
        a = state["arrays"]
        m.classes_ = a["classes"]
        m.stumps = [DecisionStump(int(r[0]), float(r[1]), int(r[2]), int(r[3])) for r in a["stumps"]]
        m.alphas = [float(x) for x in a["alphas"]]
        return m


class GradientBoosting:
    """Gradient-boosted regression trees.

    Squared loss for regression, logistic loss for classification (one
    logistic ensemble per class, one-vs-rest, when there are more than two
    classes). Every tree fits the current negative gradient and its leaves
    hold the mean gradient of their samples.
    """

    kind = "gradient_boosting"

    def __init__(self, n_trees: int = 100, depth: int = 3, lr: float = 0.1, regression: bool = False):
        self.n_trees = n_trees
        self.depth = depth
        self.lr = lr
        self.regression = regression

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        if self.regression:
            y = np.asarray(y, dtype=float)
            self.classes_ = None
            self.init_ = np.array([y.mean()])
            self.trees_ = [self._boost(X, y, self.init_[0], _residual_sq)]
            return self
        self.classes_, codes = _encode(y)
        k = len(self.classes_)
        if k == 1:
            self.init_ = np.array([np.inf])
            self.trees_ = [[]]
            return self
        targets = [codes == 1] if k == 2 else [codes == c for c in range(k)]
        self.init_ = np.empty(len(targets))
        self.trees_ = []
        for i, t in enumerate(targets):
            t = t.astype(float)
            p = t.mean()
            self.init_[i] = math.log(p / (1.0 - p))
            self.trees_.append(self._boost(X, t, self.init_[i], _residual_logistic))
        return self

    def _boost(self, X, y, f0, residual):
        f = np.full(len(y), f0)
        trees = []
        for _ in range(self.n_trees):
            r = residual(y, f)
            if np.abs(r).max() < 1e-12:
                break
            tree = RegressionTree(self.depth).fit(X, r)
            f += self.lr * tree.predict(X)
            trees.append(tree)
        return trees

    def raw_scores(self, X, n_trees: int | None = None) -> np.ndarray:
        """Additive scores, one column per ensemble, optionally using only the first trees."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty((len(X), len(self.init_)))
        for i, (f0, trees) in enumerate(zip(self.init_, self.trees_)):
            f = np.full(len(X), f0)
            for tree in trees[:n_trees]:
                f += self.lr * tree.predict(X)
            out[:, i] = f
        return out

    def predict_proba(self, X, n_trees: int | None = None) -> np.ndarray:
        if self.regression:
            raise TypeError("regression model has no class probabilities")
        f = self.raw_scores(X, n_trees)
        if len(self.classes_) == 1:
            return np.ones((len(f), 1))
        if len(self.classes_) == 2:
            p = _sigmoid(f[:, 0])
            return np.column_stack([1.0 - p, p])
        p = _sigmoid(f)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        if self.regression:
            return self.raw_scores(X)[:, 0]
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]

    def get_state(self) -> dict:
        arrays = {"init": self.init_}
        if self.classes_ is not None:
            arrays["classes"] = self.classes_
        for i, trees in enumerate(self.trees_):
            for t, tree in enumerate(trees):
                for name, arr in tree.get_arrays().items():
                    arrays[f"tree.{i}.{t}.{name}"] = arr
        counts = [len(trees) for trees in self.trees_]
        return {"params": {"n_trees": self.n_trees, "depth": self.depth, "lr": self.lr,
                           "regression": self.regression},
                "arrays": arrays, "meta": {"trees_per_ensemble": counts}}

    @classmethod
    def from_state(cls, state):
        m = cls(**state["params"])
        a = state["arrays"]
        m.init_ = a["init"]
        m.classes_ = a.get("classes")
        m.trees_ = []
        for i, count in enumerate(state["meta"]["trees_per_ensemble"]):
            m.trees_.append([
                RegressionTree.from_arrays(
                    {name: a[f"tree.{i}.{t}.{name}"]
                     for name in ("feature", "threshold", "left", "right", "value")}, m.depth)
                for t in range(count)
            ])
        return m


def _residual_sq(y, f):
    return y - f


def _residual_logistic(y, f):
    return y - _sigmoid(f)
