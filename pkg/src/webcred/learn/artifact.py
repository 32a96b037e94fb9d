"""Trained-model artifacts: selection mask + learner, serializable to JSON."""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ..vector import FeatureVector, SchemaError, schema_fingerprint
from .boosting import AdaBoost, GradientBoosting
from .linear import LinearSVR, Ridge
from .naive_bayes import MultinomialNB
from .selection import select_percentile

FORMAT_VERSION = 1

LEARNERS = {
    "nb": MultinomialNB,
    "adaboost": AdaBoost,
    "gradient_boosting": GradientBoosting,
    "ridge": Ridge,
    "svr": LinearSVR,
}
REGRESSORS = {"ridge", "svr"}


@dataclass(frozen=True)
class LearnerSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in LEARNERS:
            raise ValueError(f"unknown learner {self.kind!r}; choose from {sorted(LEARNERS)}")

    def build(self, regression: bool = False):
        if regression and self.kind == "gradient_boosting":
            return GradientBoosting(**{**self.params, "regression": True})
        if regression and self.kind not in REGRESSORS | {"gradient_boosting"}:
            raise ValueError(f"{self.kind} cannot do regression")
        if not regression and self.kind in REGRESSORS:
            raise ValueError(f"{self.kind} is a regressor")
        return LEARNERS[self.kind](**self.params)

    def describe(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({args})"


@dataclass
class ModelArtifact:
    kind: str
    params: dict
    model: Any
    mask: np.ndarray
    schema: tuple[str, ...]
    regression: bool
    selection: dict = field(default_factory=dict)
    scores: np.ndarray | None = None
    vocabularies: dict = field(default_factory=dict)

    @property
    def fingerprint(self) -> str:
        return schema_fingerprint(self.schema)

    @property
    def classes(self) -> list | None:
        return None if self.regression else list(self.model.classes_)

    def selected_names(self) -> list[str]:
        return [n for n, keep in zip(self.schema, self.mask) if keep]

    def check(self, schema: Sequence[str]) -> None:
        if schema_fingerprint(schema) != self.fingerprint:
            raise SchemaError("feature schema does not match the model's training schema")

    def to_json(self) -> str:
        state = self.model.get_state()
        doc = {
            "format": "webcred-model",
            "version": FORMAT_VERSION,
            "kind": self.kind,
            "params": state["params"],
            "meta": state.get("meta", {}),
            "regression": self.regression,
            "schema": list(self.schema),
            "fingerprint": self.fingerprint,
            "selection": self.selection,
            "mask": _pack(self.mask.astype(np.uint8)),
            "scores": None if self.scores is None else _pack(self.scores),
            "arrays": {k: _pack(v) for k, v in sorted(state["arrays"].items())},
            "vocabularies": self.vocabularies,
        }
        return json.dumps(doc, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ModelArtifact":
        doc = json.loads(text)
        if doc.get("format") != "webcred-model":
            raise ValueError("not a webcred model artifact")
        if doc["version"] != FORMAT_VERSION:
            raise ValueError(f"unsupported artifact version {doc['version']}")
        state = {"params": doc["params"], "meta": doc["meta"],
                 "arrays": {k: _unpack(v) for k, v in doc["arrays"].items()}}
        model = LEARNERS[doc["kind"]].from_state(state)
        art = cls(doc["kind"], doc["params"], model, _unpack(doc["mask"]).astype(bool),
                  tuple(doc["schema"]), doc["regression"], doc["selection"],
                  None if doc["scores"] is None else _unpack(doc["scores"]), doc["vocabularies"])
        if art.fingerprint != doc["fingerprint"]:
            raise SchemaError("artifact fingerprint does not match its schema")
        return art

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "ModelArtifact":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def _pack(a) -> dict:
    a = np.asarray(a)
    if a.dtype.kind in "USO":
        return {"dtype": "str", "shape": list(a.shape), "data": [str(x) for x in a.ravel()]}
    a = np.ascontiguousarray(a)
    if a.dtype.kind in "iub":
        a = a.astype("<i8")
    else:
        a = a.astype("<f8")
    return {"dtype": a.dtype.str, "shape": list(a.shape),
            "data": base64.b64encode(a.tobytes()).decode("ascii")}


def _unpack(d: dict) -> np.ndarray:
    if d["dtype"] == "str":
        return np.array(d["data"], dtype=str).reshape(d["shape"])
    return np.frombuffer(base64.b64decode(d["data"]), dtype=d["dtype"]).reshape(d["shape"]).copy()


def train(X, y, schema: Sequence[str], spec: LearnerSpec, percentile: float = 100, *,
          regression: bool = False, mode: str = "percentile", vocabularies: dict | None = None) -> ModelArtifact:
    """Fit feature selection then the learner on the selected columns."""
    X = np.asarray(X, dtype=float)
    if X.shape[1] != len(schema):
        raise SchemaError(f"{X.shape[1]} columns for {len(schema)} schema names")
    mask, scores = select_percentile(X, y, percentile, regression=regression, mode=mode)
    model = spec.build(regression).fit(X[:, mask], y)
    return ModelArtifact(spec.kind, dict(spec.params), model, mask, tuple(schema), regression,
                         {"amount": percentile, "mode": mode}, scores, vocabularies or {})


def predict_matrix(model: ModelArtifact, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))[:, model.mask]
    if model.regression:
        return np.asarray(model.model.predict(X), dtype=float)
    return model.model.predict_proba(X)


def predict(model: ModelArtifact, x: FeatureVector):
    """Class-probability dict (classification) or a float (regression)."""
    model.check(x.schema)
    out = predict_matrix(model, x.values[None, :])
    if model.regression:
        return float(out[0])
    return {str(c): float(p) for c, p in zip(model.classes, out[0])}
