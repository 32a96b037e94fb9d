"""Likert class schemes, metrics, cross-validation and the padding sweep."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .html2seq import PAD_GRID, TagVocab, build_vocab, count_matrix
from .learn.artifact import LearnerSpec, predict_matrix, train
from .learn.stacking import out_of_fold_probs

DEFAULT_FOLDS = 10


class InvalidRating(ValueError):
    pass


class EmptyEval(ValueError):
    pass


class StratificationError(ValueError):
    pass


@dataclass(frozen=True)
class ClassScheme:
    name: str
    mapping: dict
    regression: bool = False

    @property
    def labels(self) -> list:
        seen = []
        for r in sorted(self.mapping):
            if self.mapping[r] not in seen:
                seen.append(self.mapping[r])
        return seen


SCHEMES = {
    "two_class": ClassScheme("two_class", {1: "low", 2: "low", 3: "low", 4: "high", 5: "high"}),
    "three_class": ClassScheme("three_class", {1: "low", 2: "low", 3: "medium", 4: "high", 5: "high"}),
    "five_class": ClassScheme("five_class", {r: r for r in range(1, 6)}, regression=True),
}


def get_scheme(scheme: str | ClassScheme) -> ClassScheme:
    if isinstance(scheme, ClassScheme):
        return scheme
    try:
        return SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {sorted(SCHEMES)}") from None


def map_likert(rating: int, scheme: str | ClassScheme):
    s = get_scheme(scheme)
    if isinstance(rating, bool) or rating not in s.mapping:
        raise InvalidRating(f"rating must be an integer in 1..5, got {rating!r}")
    return s.mapping[rating]


# --------------------------------------------------------------------------
# metrics

@dataclass
class MetricsReport:
    per_class: dict = field(default_factory=dict)
    micro: dict = field(default_factory=dict)
    macro: dict = field(default_factory=dict)
    weighted: dict = field(default_factory=dict)
    regression: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    n: int = 0

    def to_table(self) -> str:
        """Tab-separated table: per-class rows, then aggregate rows."""
        if self.regression:
            cols = ("r2", "rmse", "mae", "evar")
            lines = ["\t".join(("metric",) + cols),
                     "\t".join(["value"] + [f"{self.regression[c]:.3f}" for c in cols])]
            return "\n".join(lines) + "\n"
        lines = ["class\tprecision\trecall\tf1\tsupport"]
        for label, m in self.per_class.items():
            lines.append(f"{label}\t{m['precision']:.3f}\t{m['recall']:.3f}\t{m['f1']:.3f}\t{m['support']}")
        for name in ("weighted", "micro", "macro"):
            m = getattr(self, name)
            lines.append(f"{name}\t{m['precision']:.3f}\t{m['recall']:.3f}\t{m['f1']:.3f}\t{self.n}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {"per_class": {str(k): v for k, v in self.per_class.items()}, "micro": self.micro,
                "macro": self.macro, "weighted": self.weighted, "regression": self.regression,
                "flags": self.flags, "n": self.n}


def _ratio(num: float, den: float, flag: str, flags: list) -> float:
    if den == 0:
        flags.append(flag)
        return 0.0
    return num / den


def classification_report(y_true: Sequence, y_pred: Sequence, class_order: Sequence) -> MetricsReport:
    y_true, y_pred = list(y_true), list(y_pred)
    if len(y_true) != len(y_pred):
        raise ValueError("y_true and y_pred differ in length")
    if not y_true:
        raise EmptyEval("no predictions to evaluate")
    unknown = (set(y_true) | set(y_pred)) - set(class_order)
    if unknown:
        raise ValueError(f"labels outside class_order: {sorted(map(str, unknown))}")
    t, p = np.array(y_true, dtype=object), np.array(y_pred, dtype=object)
    report = MetricsReport(n=len(y_true))
    tp_all = fp_all = fn_all = 0
    for c in class_order:
        tp = int(np.sum((t == c) & (p == c)))
        fp = int(np.sum((t != c) & (p == c)))
        fn = int(np.sum((t == c) & (p != c)))
        prec = _ratio(tp, tp + fp, f"precision undefined for {c}", report.flags)
        rec = _ratio(tp, tp + fn, f"recall undefined for {c}", report.flags)
        f1 = 2 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0
        report.per_class[c] = {"precision": prec, "recall": rec, "f1": f1, "support": tp + fn}
        tp_all, fp_all, fn_all = tp_all + tp, fp_all + fp, fn_all + fn
    mp = tp_all / (tp_all + fp_all)
    mr = tp_all / (tp_all + fn_all)
    report.micro = {"precision": mp, "recall": mr, "f1": 2 * mp * mr / (mp + mr) if mp + mr else 0.0}
    rows = list(report.per_class.values())
    support = np.array([r["support"] for r in rows], dtype=float)
    for key in ("precision", "recall", "f1"):
        vals = np.array([r[key] for r in rows])
        report.macro[key] = float(vals.mean())
        report.weighted[key] = float(vals @ support / support.sum())
    return report


def regression_report(y_true: Sequence[float], y_pred: Sequence[float]) -> MetricsReport:
    y = np.asarray(y_true, dtype=float)
    yhat = np.asarray(y_pred, dtype=float)
    if len(y) != len(yhat):
        raise ValueError("y_true and y_pred differ in length")
    if len(y) == 0:
        raise EmptyEval("no predictions to evaluate")
    report = MetricsReport(n=len(y))
    resid = y - yhat
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    var_y = float(y.var())
    if ss_tot == 0:
        report.flags.append("constant y_true: r2 and evar reported as 0")
        r2 = evar = 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
        evar = 1.0 - float(resid.var()) / var_y
    report.regression = {"r2": r2, "rmse": math.sqrt(ss_res / len(y)),
                         "mae": float(np.abs(resid).mean()), "evar": evar}
    return report


# --------------------------------------------------------------------------
# cross-validation

@dataclass
class Dataset:
    """Row-aligned features and targets (Likert ratings or class labels)."""

    X: np.ndarray
    y: np.ndarray
    ids: tuple = ()
    schema: tuple = ()

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y)
        if len(self.X) != len(self.y):
            raise ValueError("row count and target count differ")
        if self.schema and self.X.shape[1] != len(self.schema):
            raise ValueError("schema length differs from column count")
        if not self.schema:
            self.schema = tuple(f"x{j}" for j in range(self.X.shape[1]))
        if not self.ids:
            self.ids = tuple(range(len(self.y)))


def stratified_folds(labels: Sequence, n_folds: int, seed: int = 0) -> np.ndarray:
    """Fold id per row: each class is shuffled then dealt round-robin."""
    if n_folds < 2:
        raise ValueError("need at least 2 folds")
    labels = np.asarray(labels, dtype=object)
    rng = np.random.default_rng(seed)
    folds = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for c in sorted(set(labels.tolist()), key=str):
        idx = np.nonzero(labels == c)[0]
        if len(idx) < n_folds:
            raise StratificationError(
                f"class {c!r} has {len(idx)} rows but {n_folds} folds were requested; "
                f"use at most {len(idx)} folds or merge rare classes")
        idx = idx[rng.permutation(len(idx))]
        folds[idx] = (np.arange(len(idx)) + offset) % n_folds
        offset += len(idx)
    return folds


def shuffled_folds(n: int, n_folds: int, seed: int = 0) -> np.ndarray:
    if n_folds < 2 or n < n_folds:
        raise ValueError(f"cannot split {n} rows into {n_folds} folds")
    folds = np.empty(n, dtype=np.int64)
    folds[np.random.default_rng(seed).permutation(n)] = np.arange(n) % n_folds
    return folds


@dataclass
class CVResult:
    report: MetricsReport
    predictions: np.ndarray
    folds: np.ndarray
    targets: np.ndarray
    fold_reports: list
    protocol: str
    classes: list | None = None


def _targets(ds: Dataset, scheme: ClassScheme | None) -> tuple[np.ndarray, bool, list | None]:
    if scheme is None:
        labels = ds.y
        return labels, False, sorted(set(labels.tolist()), key=str)
    if scheme.regression:
        return np.array([float(map_likert(int(r), scheme)) for r in ds.y]), True, None
    labels = np.array([map_likert(int(r), scheme) for r in ds.y], dtype=object)
    present = set(labels.tolist())
    return labels, False, [c for c in scheme.labels if c in present]


def _report(y, pred, regression, classes):
    if regression:
        return regression_report(y, pred)
    return classification_report(list(y), list(pred), classes)


def cross_validate(dataset: Dataset, scheme, spec: LearnerSpec, percentile: float = 100,
                   folds: int = DEFAULT_FOLDS, seed: int = 0, *, mode: str = "percentile",
                   fold_ids: np.ndarray | None = None) -> CVResult:
    """K-fold evaluation with selection refit inside every training fold.

    ``scheme`` is a scheme name, a ``ClassScheme``, or ``None`` when
    ``dataset.y`` already holds class labels. Predictions from all folds are
    pooled into one report.
    """
    scheme = None if scheme is None else get_scheme(scheme)
    y, regression, classes = _targets(dataset, scheme)
    if fold_ids is None:
        fold_ids = shuffled_folds(len(y), folds, seed) if regression else stratified_folds(y, folds, seed)
    pred = np.empty(len(y), dtype=float if regression else object)
    fold_reports = []
    for f in np.unique(fold_ids):
        test = fold_ids == f
        model = train(dataset.X[~test], y[~test], dataset.schema, spec, percentile,
                      regression=regression, mode=mode)
        out = predict_matrix(model, dataset.X[test])
        pred[test] = out if regression else model.model.classes_[np.argmax(out, axis=1)]
        fold_reports.append(_report(y[test], pred[test], regression, classes))
    protocol = (f"{'shuffled' if regression else 'stratified'} {len(np.unique(fold_ids))}-fold CV, "
                f"seed={seed}, pooled predictions")
    return CVResult(_report(y, pred, regression, classes), pred, fold_ids, y, fold_reports,
                    protocol, classes)


def cross_validate_stacked(dataset: Dataset, tag_counts: np.ndarray, scheme, spec: LearnerSpec,
                           percentile: float = 100, folds: int = DEFAULT_FOLDS, seed: int = 0, *,
                           tag_spec: LearnerSpec | None = None, inner_folds: int = 5,
                           mode: str = "percentile") -> CVResult:
    """Cross-validate lexical features stacked with tag-classifier probabilities.

    Inside each outer training fold the tag classifier's probabilities for
    training rows are out-of-fold (inner CV); the held-out rows get
    probabilities from a tag classifier fit on the whole outer training fold.
    """
    scheme = None if scheme is None else get_scheme(scheme)
    y, regression, classes = _targets(dataset, scheme)
    if regression:
        raise ValueError("stacking uses class probabilities; pick a classification scheme")
    tag_spec = tag_spec or spec
    tag_counts = np.asarray(tag_counts, dtype=float)
    fold_ids = stratified_folds(y, folds, seed)
    pred = np.empty(len(y), dtype=object)
    fold_reports = []
    names = tuple(dataset.schema) + tuple(f"html2seq_prob_{c}" for c in classes)
    for f in np.unique(fold_ids):
        test = fold_ids == f
        tr = np.nonzero(~test)[0]
        inner = stratified_folds(y[tr], min(inner_folds, _min_class(y[tr])), seed + 1 + int(f))
        tr_probs, order = out_of_fold_probs(lambda: tag_spec.build(), tag_counts[tr], y[tr], inner)
        tag_model = tag_spec.build().fit(tag_counts[tr], y[tr])
        te_probs = np.zeros((int(test.sum()), len(order)))
        cols = [order.index(c) for c in tag_model.classes_.tolist()]
        te_probs[:, cols] = tag_model.predict_proba(tag_counts[test])
        probs_full = np.zeros((len(y), len(classes)))
        remap = [order.index(c) if c in order else None for c in classes]
        for j, src in enumerate(remap):
            if src is not None:
                probs_full[tr, j] = tr_probs[:, src]
                probs_full[test, j] = te_probs[:, src]
        X = np.hstack([dataset.X, probs_full])
        model = train(X[~test], y[~test], names, spec, percentile, mode=mode)
        out = predict_matrix(model, X[test])
        pred[test] = model.model.classes_[np.argmax(out, axis=1)]
        fold_reports.append(_report(y[test], pred[test], False, classes))
    protocol = f"stratified {folds}-fold CV, seed={seed}, stacked with out-of-fold tag probabilities"
    return CVResult(_report(y, pred, False, classes), pred, fold_ids, y, fold_reports, protocol, classes)


def _min_class(labels) -> int:
    _, counts = np.unique(np.asarray(labels, dtype=str), return_counts=True)
    return int(max(2, counts.min()))


# --------------------------------------------------------------------------
# padding sweep

@dataclass(frozen=True)
class SweepRow:
    pad: int
    weighted_f1: float
    macro_f1: float


def padding_sweep(streams: Sequence[Sequence[str]], targets: Sequence, scheme, spec: LearnerSpec,
                  grid: Sequence[int] = PAD_GRID, seed: int = 0, folds: int = DEFAULT_FOLDS,
                  vocab: TagVocab | None = None) -> list[SweepRow]:
    """Cross-validated tag-count classification at every window length in ``grid``.

    One vocabulary is shared by all window lengths.
    """
    if not grid:
        raise ValueError("padding grid is empty")
    vocab = vocab or build_vocab(streams)
    rows = []
    for pad in sorted(set(int(p) for p in grid)):
        ds = Dataset(count_matrix(streams, vocab, pad), np.asarray(targets))
        res = cross_validate(ds, scheme, spec, 100, folds, seed)
        rows.append(SweepRow(pad, res.report.weighted["f1"], res.report.macro["f1"]))
    return rows


def sweep_table(rows: Sequence[SweepRow]) -> str:
    lines = ["pad\tweighted_f1\tmacro_f1"]
    lines += [f"{r.pad}\t{r.weighted_f1:.4f}\t{r.macro_f1:.4f}" for r in rows]
    return "\n".join(lines) + "\n"


def plot_data(rows: Sequence[SweepRow]) -> str:
    """Two numeric columns (pad, weighted F1) for any plotting tool."""
    return "".join(f"{r.pad} {r.weighted_f1:.6f}\n" for r in rows)


def run_record(*, protocol: str, seed: int, scheme: str, learner: str, selection: str,
               report: MetricsReport, **extra) -> str:
    """One JSON line describing an evaluation run."""
    rec = {"protocol": protocol, "seed": seed, "scheme": scheme, "learner": learner,
           "selection": selection, "metrics": report.as_dict(), **extra}
    return json.dumps(rec, sort_keys=True, default=str)
