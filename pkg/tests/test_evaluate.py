import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import confusion_metrics, regression_metrics
from webcred.evaluate import (
    SCHEMES, Dataset, EmptyEval, InvalidRating, StratificationError, classification_report, cross_validate,
    get_scheme, map_likert, padding_sweep, plot_data, regression_report, run_record, stratified_folds,
    sweep_table,
)
from webcred.learn import LearnerSpec


@pytest.mark.parametrize("rating,scheme,label", [
    (3, "two_class", "low"), (3, "three_class", "medium"), (5, "two_class", "high"),
    (1, "three_class", "low"), (4, "five_class", 4),
])
def test_map_likert_examples(rating, scheme, label):
    assert map_likert(rating, scheme) == label


@pytest.mark.parametrize("bad", [0, 6, 3.5, True, "3"])
def test_map_likert_invalid(bad):
    with pytest.raises(InvalidRating):
        map_likert(bad, "two_class")


def test_unknown_scheme():
    with pytest.raises(ValueError):
        get_scheme("seven_class")
    assert SCHEMES["three_class"].labels == ["low", "medium", "high"]


def test_classification_hand_example():
    r = classification_report(list("LLHH"), list("LHHH"), ["L", "H"])
    assert r.per_class["H"]["precision"] == pytest.approx(2 / 3)
    assert r.per_class["H"]["recall"] == 1.0
    assert r.per_class["H"]["f1"] == pytest.approx(0.8)
    assert r.per_class["L"]["precision"] == 1.0 and r.per_class["L"]["recall"] == 0.5
    assert r.per_class["L"]["f1"] == pytest.approx(2 / 3)
    assert r.macro["f1"] == pytest.approx(0.7333333333333333)
    assert "class\tprecision" in r.to_table()


def test_classification_perfect_and_degenerate():
    r = classification_report(["a", "b"], ["a", "b"], ["a", "b"])
    assert r.micro["f1"] == r.macro["f1"] == r.weighted["f1"] == 1.0
    d = classification_report(["a", "a"], ["a", "a"], ["a", "b"])
    assert d.micro["f1"] == 1.0
    assert any("undefined for b" in f for f in d.flags)
    with pytest.raises(EmptyEval):
        classification_report([], [], ["a"])
    with pytest.raises(ValueError):
        classification_report(["z"], ["a"], ["a"])


@given(st.integers(1, 3).flatmap(lambda k: st.lists(
    st.tuples(st.integers(0, k - 1), st.integers(0, k - 1)), min_size=1, max_size=50)))
def test_classification_matches_oracle(pairs):
    t, p = [a for a, _ in pairs], [b for _, b in pairs]
    classes = sorted(set(t) | set(p))
    per, micro, macro, weighted = confusion_metrics(t, p, classes)
    r = classification_report(t, p, classes)
    for c in classes:
        for i, key in enumerate(("precision", "recall", "f1")):
            assert r.per_class[c][key] == pytest.approx(per[c][i], abs=1e-9)
    assert r.micro["f1"] == pytest.approx(micro, abs=1e-9)
    assert r.micro["f1"] == pytest.approx(np.mean(np.array(t) == np.array(p)), abs=1e-12)
    for key in ("precision", "recall", "f1"):
        assert r.macro[key] == pytest.approx(macro[key], abs=1e-9)
        assert r.weighted[key] == pytest.approx(weighted[key], abs=1e-9)


def test_regression_examples():
    r = regression_report([1, 2, 3], [2, 2, 2]).regression
    assert r["r2"] == pytest.approx(0.0) and r["evar"] == pytest.approx(0.0)
    assert r["rmse"] == pytest.approx(math.sqrt(2 / 3)) and r["mae"] == pytest.approx(2 / 3)
    ident = regression_report([1, 4, 2], [1, 4, 2]).regression
    assert ident == {"r2": 1.0, "rmse": 0.0, "mae": 0.0, "evar": 1.0}
    flat = regression_report([3, 3], [2, 4])
    assert flat.regression["r2"] == 0.0 and flat.flags
    with pytest.raises(EmptyEval):
        regression_report([], [])


@given(st.lists(st.tuples(st.integers(1, 5), st.floats(0, 6)), min_size=2, max_size=40))
def test_regression_matches_oracle(pairs):
    y, yhat = [float(a) for a, _ in pairs], [b for _, b in pairs]
    if len(set(y)) < 2:
        return
    ours = regression_report(y, yhat).regression
    for k, v in regression_metrics(y, yhat).items():
        assert ours[k] == pytest.approx(v, abs=1e-9)


@given(st.lists(st.sampled_from("abc"), min_size=6, max_size=60), st.integers(2, 5), st.integers(0, 99))
def test_folds_partition_and_stratify(labels, k, seed):
    counts = {c: labels.count(c) for c in set(labels)}
    if min(counts.values()) < k:
        with pytest.raises(StratificationError):
            stratified_folds(labels, k, seed)
        return
    folds = stratified_folds(labels, k, seed)
    assert len(folds) == len(labels) and set(folds.tolist()) == set(range(k))
    for c, n in counts.items():
        per = np.bincount(folds[np.array(labels) == c], minlength=k)
        assert per.max() - per.min() <= 1


def _planted(n=60, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.poisson(2, size=(n, 6)).astype(float)
    ratings = rng.integers(1, 6, n)
    X[:, 3] = (ratings >= 4) * 5.0
    return Dataset(X, ratings)


def test_cross_validate_planted_signal_and_determinism():
    ds = _planted()
    spec = LearnerSpec("gradient_boosting", {"n_trees": 10})
    a = cross_validate(ds, "two_class", spec, 25, 5, seed=3)
    b = cross_validate(ds, "two_class", spec, 25, 5, seed=3)
    assert a.report.weighted["f1"] == 1.0
    assert (a.folds == b.folds).all() and a.report.as_dict() == b.report.as_dict()
    assert "stratified 5-fold" in a.protocol


def test_cross_validate_regression():
    ds = _planted()
    res = cross_validate(ds, "five_class", LearnerSpec("ridge"), 100, 5)
    assert res.classes is None and "r2" in res.report.regression


def test_cross_validate_stratification_error():
    ds = Dataset(np.ones((6, 2)), [1, 1, 1, 1, 1, 5])
    with pytest.raises(StratificationError, match="at most 1 folds"):
        cross_validate(ds, "two_class", LearnerSpec("nb"), folds=2)


def test_selection_leakage_canary():
    rng = np.random.default_rng(11)
    n = 400
    ratings = np.tile([1, 1, 5, 5], n // 4)
    X = rng.poisson(3, size=(n, 20)).astype(float)
    fold_ids = np.arange(n) % 2
    # oracle column equals the label, but only on fold-0 rows
    X[:, 0] = np.where(fold_ids == 0, (ratings == 5) * 10.0, 0.0)
    res = cross_validate(Dataset(X, ratings), "two_class", LearnerSpec("nb"), 5, seed=0, fold_ids=fold_ids)
    held_out = res.fold_reports[0].weighted["f1"]
    assert held_out < 0.65


def test_padding_sweep_contract():
    streams = [["div"] * 3 + ["a"] * i for i in range(20)]
    targets = [1, 5] * 10
    rows = padding_sweep(streams, targets, "two_class", LearnerSpec("nb"), grid=(50, 25), folds=2)
    assert [r.pad for r in rows] == [25, 50]
    single = padding_sweep(streams, targets, "two_class", LearnerSpec("nb"), grid=(25,), folds=2)
    assert len(single) == 1
    assert sweep_table(rows).splitlines()[0] == "pad\tweighted_f1\tmacro_f1"
    assert len(plot_data(rows).splitlines()) == 2
    with pytest.raises(ValueError):
        padding_sweep(streams, targets, "two_class", LearnerSpec("nb"), grid=())


def test_run_record_is_json_line():
    import json
    r = classification_report(["a"], ["a"], ["a"])
    rec = json.loads(run_record(protocol="p", seed=1, scheme="two_class", learner="nb", selection="25",
                                report=r))
    assert rec["metrics"]["micro"]["f1"] == 1.0 and rec["seed"] == 1
