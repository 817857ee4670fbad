"""Perturbation-driven global importance (shuffling, loss-game sampling) and
the local ridge surrogate."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidParameterError, MissingTargetsError
from ..models import Model
from .base import WeightedRows

LIME_RIDGE = 1e-3
SAGE_EXACT_BUDGET = 4096  # max composite rows for exact background marginalization


def permutation_importance(
    model: Model, eval_rows: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Mean absolute prediction change after shuffling one column, once each.

    A single shuffle pass per feature, matching the single-run protocol.
    Shuffling a constant column is the identity, so constants score exactly 0.
    """
    eval_rows = np.asarray(eval_rows, dtype=float)
    n, d = eval_rows.shape
    if n < 2:
        raise InvalidParameterError("need at least two evaluation rows to shuffle")
    base = model.predict(eval_rows)
    importance = np.empty(d)
    for j in range(d):
        shuffled = eval_rows.copy()
        shuffled[:, j] = eval_rows[rng.permutation(n), j]
        importance[j] = float(np.mean(np.abs(base - model.predict(shuffled))))
    return importance


def sage_importance(
    model: Model,
    eval_rows: np.ndarray,
    eval_targets: np.ndarray | None,
    background: WeightedRows,
    n_permutations: int,
    rng: np.random.Generator,
    eval_weights: np.ndarray | None = None,
) -> np.ndarray:
    """Permutation-sampled Shapley values of the loss game.

    v(S) is minus the (weighted) mean squared error when features in S are
    revealed and the rest are marginalized over the background, one paired
    background draw per permutation and evaluation row. The budget is fixed;
    there is no convergence detection. Values may be negative.
    """
    if eval_targets is None:
        raise MissingTargetsError("sage needs targets for its evaluation rows")
    if n_permutations < 1:
        raise InvalidParameterError("need n_permutations >= 1")
    eval_rows = np.asarray(eval_rows, dtype=float)
    targets = np.asarray(eval_targets, dtype=float)
    n, d = eval_rows.shape
    if eval_weights is None:
        eval_weights = np.full(n, 1.0 / n)

    stacked = np.vstack([eval_rows, background.rows])
    walk = np.flatnonzero(stacked.max(axis=0) > stacked.min(axis=0))
    phi = np.zeros(d)
    if walk.size == 0:
        return phi

    bg_rows = background.rows
    bg_weights = background.weights
    m = bg_rows.shape[0]
    exact = n * m <= SAGE_EXACT_BUDGET
    if exact:
        base = np.repeat(bg_rows[None, :, :], n, axis=0).reshape(n * m, d)
        reveal = np.repeat(eval_rows, m, axis=0)

        def loss(composite: np.ndarray) -> float:
            # marginalize the prediction over the background, then score it
            pred = model.predict(composite).reshape(n, m) @ bg_weights
            return float(-((targets - pred) ** 2) @ eval_weights)

    else:
        reveal = eval_rows

        def loss(composite: np.ndarray) -> float:
            return float(-((targets - model.predict(composite)) ** 2) @ eval_weights)

    def run_order(order: np.ndarray, start: np.ndarray):
        composite = start.copy()
        prev = loss(composite)
        for j in order:
            composite[:, j] = reveal[:, j]
            cur = loss(composite)
            phi[j] += cur - prev
            prev = cur

    # antithetic pairs: every sampled order is also walked in reverse, which
    # cancels the order-mix noise (and is exact for two varying features)
    pairs = (n_permutations + 1) // 2
    for _ in range(pairs):
        order = rng.permutation(walk)
        if exact:
            start = base
        else:
            start = bg_rows[rng.choice(m, size=n, p=bg_weights)]
        run_order(order, start)
        run_order(order[::-1], start)
    return phi / (2 * pairs)


def lime_attribution(
    model: Model,
    background: WeightedRows,
    x: np.ndarray,
    n_samples: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Local ridge surrogate over binary keep-masks.

    Each sample keeps the explained value where the mask is one and substitutes
    a random background row's value elsewhere; samples are weighted by
    exp(-(hamming distance)^2 / sigma^2) with sigma = 0.75 * sqrt(d).
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    if n_samples < d + 2:
        raise InvalidParameterError(f"need n_samples >= d + 2 = {d + 2}")
    masks = rng.random((n_samples, d)) < 0.5
    draws = rng.choice(background.rows.shape[0], size=n_samples, p=background.weights)
    composite = np.where(masks, x[None, :], background.rows[draws])
    preds = model.predict(composite)

    hamming = d - masks.sum(axis=1)
    sigma = 0.75 * np.sqrt(d)
    weights = np.exp(-(hamming.astype(float) ** 2) / sigma**2)

    z = np.column_stack([masks.astype(float), np.ones(n_samples)])
    zw = z * weights[:, None]
    gram = zw.T @ z
    penalty = LIME_RIDGE * np.eye(d + 1)
    penalty[d, d] = 0.0  # intercept unpenalized
    coef = np.linalg.solve(gram + penalty, zw.T @ preds)
    return coef[:d]
