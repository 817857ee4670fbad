"""Shared explainer contracts: explanations, descriptors, and the coalition game.

The value function used by every Shapley-family method is interventional:
v(S) is the weighted mean, over background rows b, of the model applied to the
composite that takes the explained row on S and b off S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InvalidParameterError
from ..models import Model

_CHUNK_ROWS = 1 << 18


@dataclass(frozen=True)
class Explanation:
    """Explainer output: a baseline plus attribution rows and/or importances."""

    baseline: float
    produced_by: str
    local_attributions: Optional[np.ndarray] = None
    global_importance: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ExplainerDescriptor:
    """Capability card: what an explainer can consume and produce.

    ``max_features`` bounds exact enumeration; the scheduler skips tests whose
    feature count exceeds it. ``normalized_output`` marks explanations on a
    [0, 1] scale that absolute-threshold tests must rescale to model units.
    """

    id: str
    supported_kinds: frozenset[str]
    outputs: frozenset[str]
    required_inputs: frozenset[str]
    perturbation_based: bool
    max_features: Optional[int] = None
    normalized_output: bool = False

    @property
    def portability(self) -> int:
        return len(self.supported_kinds)


@dataclass(frozen=True)
class WeightedRows:
    """Rows with nonnegative weights summing to one."""

    rows: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        rows = np.ascontiguousarray(np.asarray(self.rows, dtype=float))
        weights = np.asarray(self.weights, dtype=float)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise InvalidParameterError("need at least one background row")
        if weights.shape != (rows.shape[0],) or np.any(weights < 0):
            raise InvalidParameterError("weights must be nonnegative, one per row")
        total = weights.sum()
        if not np.isfinite(total) or total <= 0:
            raise InvalidParameterError("weights must sum to a positive number")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "weights", weights / total)

    @classmethod
    def uniform(cls, rows: np.ndarray) -> "WeightedRows":
        rows = np.asarray(rows, dtype=float)
        return cls(rows, np.full(rows.shape[0], 1.0 / rows.shape[0]))


@dataclass
class ExplainInputs:
    """Everything a registered explainer may consume for one test."""

    background: WeightedRows
    attr_rows: WeightedRows
    eval_rows: np.ndarray
    eval_targets: Optional[np.ndarray] = None
    loss_rows: Optional[WeightedRows] = None
    loss_targets: Optional[np.ndarray] = None
    sage_permutations: int = 256
    sage_eval_rows: int = 100
    lime_samples: int = 5000


class CoalitionGame:
    """Interventional coalition values for one explained row, with a mask cache."""

    def __init__(self, model: Model, background: WeightedRows, x: np.ndarray):
        self.model = model
        self.background = background
        self.x = np.asarray(x, dtype=float)
        self.d = self.x.size
        self._cache: dict[bytes, float] = {}

    def value(self, mask: np.ndarray) -> float:
        return self.values(np.asarray(mask, dtype=bool)[None, :])[0]

    def values(self, masks: np.ndarray) -> np.ndarray:
        """v(S) for a (k, d) boolean mask matrix, chunked and cached."""
        masks = np.asarray(masks, dtype=bool)
        out = np.empty(masks.shape[0])
        missing: list[int] = []
        for i in range(masks.shape[0]):
            cached = self._cache.get(masks[i].tobytes())
            if cached is None:
                missing.append(i)
            else:
                out[i] = cached
        if missing:
            bg, w = self.background.rows, self.background.weights
            per_mask = bg.shape[0]
            step = max(1, _CHUNK_ROWS // per_mask)
            for start in range(0, len(missing), step):
                batch = [missing[i] for i in range(start, min(start + step, len(missing)))]
                sel = masks[batch]
                composite = np.where(sel[:, None, :], self.x[None, None, :], bg[None, :, :])
                preds = self.model.predict(composite.reshape(-1, self.d))
                vals = preds.reshape(len(batch), per_mask) @ w
                for i, v in zip(batch, vals):
                    out[i] = self._cache[masks[i].tobytes()] = float(v)
        return out

    def baseline(self) -> float:
        return self.value(np.zeros(self.d, dtype=bool))

    def full(self) -> float:
        return self.value(np.ones(self.d, dtype=bool))


def varying_features(x: np.ndarray, background: WeightedRows, atol: float = 0.0) -> np.ndarray:
    """Features whose explained value differs from at least one background row.

    Non-varying features provably contribute zero to every coalition value,
    so enumeration-based explainers exclude them up front.
    """
    diffs = np.abs(background.rows - np.asarray(x, dtype=float)[None, :])
    return (diffs > atol).any(axis=0)


def weighted_mean_abs(attributions: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Global importance convention: weighted mean of |local attribution|."""
    return np.abs(attributions).T @ weights
