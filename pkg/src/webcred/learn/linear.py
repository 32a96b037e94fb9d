from __future__ import annotations

import numpy as np


class Standardizer:
    """Column-wise z-scoring; constant columns map to zero."""

    def fit(self, X):
        X = np.asarray(X, dtype=float)
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        return self

    def transform(self, X):
        return (np.atleast_2d(np.asarray(X, dtype=float)) - self.mean_) / self.scale_


class Ridge:
    """L2-penalized least squares on standardized features.

    Solves ``(Z'Z + lam I) beta = Z'(y - mean(y))`` for standardized ``Z``;
    the intercept is never penalized. ``lam = 0`` uses the pseudo-inverse.
    """

    kind = "ridge"
    regression = True

    def __init__(self, lam: float = 1.0):
        if lam < 0:
            raise ValueError("lam must be >= 0")
        self.lam = lam

    def fit(self, X, y):
        y = np.asarray(y, dtype=float)
        self.scaler_ = Standardizer().fit(X)
        Z = self.scaler_.transform(X)
        yc = y - y.mean()
        gram = Z.T @ Z
        if self.lam > 0:
            beta = np.linalg.solve(gram + self.lam * np.eye(Z.shape[1]), Z.T @ yc)
        else:
            beta = np.linalg.pinv(Z) @ yc
        self.beta_ = beta
        self.coef_ = beta / self.scaler_.scale_
        self.intercept_ = float(y.mean() - self.scaler_.mean_ @ self.coef_)
        return self

    def predict(self, X):
        return np.atleast_2d(np.asarray(X, dtype=float)) @ self.coef_ + self.intercept_

    def get_state(self):
        return {"params": {"lam": self.lam},
                "arrays": {"coef": self.coef_, "intercept": np.array([self.intercept_])}}

    @classmethod
    def from_state(cls, state):
        m = cls(**state["params"])
        m.coef_ = state["arrays"]["coef"]
        m.intercept_ = float(state["arrays"]["intercept"][0])
        return m


class LinearSVR:
    """Linear epsilon-insensitive regression trained by averaged SGD.

    Minimizes ``mean(max(0, |y - w.x - b| - eps)) + lam/2 |w|^2`` over
    standardized inputs with step ``eta0 / sqrt(t)``; the returned weights
    are the average of all iterates after the first epoch.
    """

    kind = "svr"
    regression = True

    def __init__(self, eps: float = 0.1, lam: float = 1e-3, epochs: int = 50, eta0: float = 0.1,
                 seed: int = 0):
        self.eps, self.lam, self.epochs, self.eta0, self.seed = eps, lam, epochs, eta0, seed

    def fit(self, X, y):
        y = np.asarray(y, dtype=float)
        self.scaler_ = Standardizer().fit(X)
        Z = self.scaler_.transform(X)
        n, d = Z.shape
        rng = np.random.default_rng(self.seed)
        w, b = np.zeros(d), 0.0
        w_avg, b_avg, n_avg = np.zeros(d), 0.0, 0
        t = 0
        for epoch in range(self.epochs):
            for i in rng.permutation(n):
                t += 1
                eta = self.eta0 / np.sqrt(t)
                r = y[i] - (Z[i] @ w + b)
                w *= 1.0 - eta * self.lam
                if abs(r) > self.eps:
                    s = np.sign(r)
                    w += eta * s * Z[i]
                    b += eta * s
                if epoch > 0 or self.epochs == 1:
                    n_avg += 1
                    w_avg += (w - w_avg) / n_avg
                    b_avg += (b - b_avg) / n_avg
        self.w_, self.b_ = w_avg, b_avg
        self.coef_ = w_avg / self.scaler_.scale_
        self.intercept_ = float(b_avg - self.scaler_.mean_ @ self.coef_)
        return self

    def predict(self, X):
        return np.atleast_2d(np.asarray(X, dtype=float)) @ self.coef_ + self.intercept_

    def loss(self, X, y) -> float:
        z = self.scaler_.transform(X)
        r = np.abs(np.asarray(y, dtype=float) - (z @ self.w_ + self.b_))
        return float(np.maximum(0.0, r - self.eps).mean() + 0.5 * self.lam * self.w_ @ self.w_)

    def get_state(self):
        return {"params": {"eps": self.eps, "lam": self.lam, "epochs": self.epochs,
                           "eta0": self.eta0, "seed": self.seed},
                "arrays": {"coef": self.coef_, "intercept": np.array([self.intercept_])}}

    @classmethod
    def from_state(cls, state):
        m = cls(**state["params"])
        m.coef_ = state["arrays"]["coef"]
        m.intercept_ = float(state["arrays"]["intercept"][0])
        return m
