from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class SchemaError(ValueError):
    pass


def schema_fingerprint(schema: Sequence[str]) -> str:
    return hashlib.sha256("\n".join(schema).encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class FeatureVector:
    """Named, fixed-order numeric features for one page."""

    values: np.ndarray
    schema: tuple[str, ...]
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "schema", tuple(self.schema))
        if values.ndim != 1 or len(values) != len(self.schema):
            raise SchemaError(f"{len(values)} values for {len(self.schema)} schema names")
        if not np.isfinite(values).all():
            bad = [self.schema[i] for i in np.nonzero(~np.isfinite(values))[0]]
            raise SchemaError(f"non-finite feature values: {bad}")

    def __len__(self):
        return len(self.values)

    @property
    def fingerprint(self) -> str:
        return schema_fingerprint(self.schema)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.schema, self.values.tolist()))
