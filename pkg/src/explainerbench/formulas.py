"""Closed-form labeling functions shared by dataset labeling and scripted models.

All formulas are vectorized over a row matrix and return one target per row.
Boolean formulas expect features encoded as 0.0/1.0.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ArityMismatchError, UnknownFormulaError


def _cough_and_fever(x: np.ndarray) -> np.ndarray:
    return 80.0 * x[:, 0] * x[:, 1]


def _cough_and_fever_10_90(x: np.ndarray) -> np.ndarray:
    return 80.0 * x[:, 0] * x[:, 1] + 10.0 * x[:, 0]


def _sum2(x: np.ndarray) -> np.ndarray:
    return x[:, 0] + x[:, 1]


def _a_and_b_or_c(x: np.ndarray) -> np.ndarray:
    # A and (B or C) on 0/1 encodings.
    return x[:, 0] * np.maximum(x[:, 1], x[:, 2])


def _dummy_axiom(x: np.ndarray) -> np.ndarray:
    # f(A, B) = A; B is an unused player by construction.
    return x[:, 0].copy()


def center_pixel_indices(side: int) -> list[int]:
    """Flat indices of the four central pixels of a side x side grid."""
    lo, hi = side // 2 - 1, side // 2
    return [r * side + c for r in (lo, hi) for c in (lo, hi)]


def _center_mean(x: np.ndarray) -> np.ndarray:
    side = math.isqrt(x.shape[1])
    return x[:, center_pixel_indices(side)].mean(axis=1)


def _center_mean_arity(d: int) -> bool:
    side = math.isqrt(d)
    return side * side == d and side >= 4


_FIXED_ARITY = {
    "cough_and_fever": (2, _cough_and_fever),
    "cough_and_fever_10_90": (2, _cough_and_fever_10_90),
    "sum2": (2, _sum2),
    "a_and_b_or_c": (3, _a_and_b_or_c),
    "dummy_axiom": (2, _dummy_axiom),
}

LABEL_FORMULAS = ("cough_and_fever", "cough_and_fever_10_90", "sum2", "a_and_b_or_c", "center_mean")


def formula_ids() -> tuple[str, ...]:
    return tuple(_FIXED_ARITY) + ("center_mean",)


def accepts_arity(formula_id: str, d: int) -> bool:
    if formula_id == "center_mean":
        return _center_mean_arity(d)
    if formula_id in _FIXED_ARITY:
        return _FIXED_ARITY[formula_id][0] == d
    raise UnknownFormulaError(formula_id)


def evaluate(formula_id: str, x: np.ndarray) -> np.ndarray:
    """Evaluate a registered formula on a (n, d) row matrix."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ArityMismatchError("expected a 2-d row matrix")
    if formula_id == "center_mean":
        if not _center_mean_arity(x.shape[1]):
            raise ArityMismatchError(
                f"center_mean needs a square pixel grid of side >= 4, got d={x.shape[1]}"
            )
        return _center_mean(x)
    if formula_id not in _FIXED_ARITY:
        raise UnknownFormulaError(formula_id)
    arity, fn = _FIXED_ARITY[formula_id]
    if x.shape[1] != arity:
        raise ArityMismatchError(f"{formula_id} expects {arity} features, got {x.shape[1]}")
    return fn(x)
