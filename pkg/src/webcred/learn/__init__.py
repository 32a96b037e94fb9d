"""From-scratch learners, feature selection and stacking."""

from .artifact import LEARNERS, LearnerSpec, ModelArtifact, predict, predict_matrix, train
from .boosting import AdaBoost, GradientBoosting
from .linear import LinearSVR, Ridge, Standardizer
from .naive_bayes import BinaryTextNB, DegenerateLabels, MultinomialNB, TextVocabulary
from .selection import PERCENTILES, f_classif, f_regression, select_percentile
from .stacking import LeakageError, TagProbs, out_of_fold_probs, stack_features, stack_matrix
from .trees import DecisionStump, RegressionTree


def train_multinomial_nb(X, y, alpha: float = 1.0) -> MultinomialNB:
    return MultinomialNB(alpha).fit(X, y)


def train_adaboost(X, y, rounds: int = 50) -> AdaBoost:
    return AdaBoost(rounds).fit(X, y)


def train_gradient_boosting(X, y, n_trees: int = 100, depth: int = 3, lr: float = 0.1,
                            regression: bool = False) -> GradientBoosting:
    return GradientBoosting(n_trees, depth, lr, regression).fit(X, y)


def train_ridge(X, y, lam: float = 1.0) -> Ridge:
    return Ridge(lam).fit(X, y)


def train_linear_svr(X, y, eps: float = 0.1, lam: float = 1e-3, epochs: int = 50, seed: int = 0) -> LinearSVR:
    return LinearSVR(eps=eps, lam=lam, epochs=epochs, seed=seed).fit(X, y)


__all__ = [
    "AdaBoost", "BinaryTextNB", "DecisionStump", "DegenerateLabels", "GradientBoosting",
    "LEARNERS", "LeakageError", "LearnerSpec", "LinearSVR", "ModelArtifact", "MultinomialNB",
    "PERCENTILES", "RegressionTree", "Ridge", "Standardizer", "TagProbs", "TextVocabulary",
    "f_classif", "f_regression", "out_of_fold_probs", "predict", "predict_matrix",
    "select_percentile", "stack_features", "stack_matrix", "train", "train_adaboost",
    "train_gradient_boosting", "train_linear_svr", "train_multinomial_nb", "train_ridge",
]
