"""Shapley-value attribution: exact enumeration, permutation sampling,
kernel-weighted least squares, and the hierarchical (Owen) recursion.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.special import binom

from ..errors import DimensionTooLargeError, InvalidParameterError
from ..models import Model
from .base import CoalitionGame, WeightedRows, varying_features

log = logging.getLogger(__name__)

EXACT_MAX_FEATURES = 12
KERNEL_ENUM_MAX_FEATURES = 13
KERNEL_SAMPLED_COALITIONS = 2048
_RIDGE = 1e-8


def _mask_matrix(d: int) -> np.ndarray:
    """All 2^d coalition masks, indexed by the bitmask integer."""
    bits = np.arange(2**d)[:, None] >> np.arange(d)[None, :]
    return (bits & 1).astype(bool)


def exact_shapley(model: Model, background: WeightedRows, x: np.ndarray) -> np.ndarray:
    """Exact Shapley values by full subset enumeration (d <= 12).

    phi_j = sum over S not containing j of |S|!(d-|S|-1)!/d! * (v(S+j) - v(S)).
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    if d > EXACT_MAX_FEATURES:
        raise DimensionTooLargeError(
            f"exact enumeration is bounded at d <= {EXACT_MAX_FEATURES}, got d={d}; "
            "use sampling_shapley instead"
        )
    game = CoalitionGame(model, background, x)
    masks = _mask_matrix(d)
    values = game.values(masks)
    sizes = masks.sum(axis=1)
    fact = [math.factorial(k) for k in range(d + 1)]
    weight_by_size = np.array(
        [fact[s] * fact[d - s - 1] / fact[d] for s in range(d)] + [0.0]
    )
    phi = np.zeros(d)
    for j in range(d):
        bit = 1 << j
        without = np.flatnonzero((np.arange(2**d) & bit) == 0)
        w = weight_by_size[sizes[without]]
        phi[j] = np.sum(w * (values[without | bit] - values[without]))
    return phi


def sampling_shapley(
    model: Model,
    background: WeightedRows,
    x: np.ndarray,
    n_permutations: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Monte Carlo Shapley: average marginal contributions along random orders."""
    if n_permutations < 1:
        raise InvalidParameterError("need n_permutations >= 1")
    x = np.asarray(x, dtype=float)
    d = x.size
    game = CoalitionGame(model, background, x)
    phi = np.zeros(d)
    for _ in range(n_permutations):
        order = rng.permutation(d)
        mask = np.zeros(d, dtype=bool)
        prev = game.value(mask)
        for j in order:
            mask[j] = True
            cur = game.value(mask)
            phi[j] += cur - prev
            prev = cur
    return phi / n_permutations


def _kernel_weight(d: int, s: int) -> float:
    return (d - 1) / (binom(d, s) * s * (d - s))


def _enumerated_coalitions(d: int):
    masks = _mask_matrix(d)[1:-1]
    sizes = masks.sum(axis=1)
    weights = np.array([_kernel_weight(d, int(s)) for s in sizes])
    return masks, weights


def _sampled_coalitions(d: int, budget: int, rng: np.random.Generator):
    """Paired coalition sampling: fully enumerate the heaviest sizes first.

    Size groups (s, d-s) are enumerated outright while their coalition count
    fits the remaining budget; leftover budget is filled with sampled
    subset/complement pairs, each carrying its size group's remaining kernel
    mass split across the draws.
    """
    group_mass = np.array([(d - 1) / (s * (d - s)) for s in range(1, d)])
    order = np.argsort([min(s, d - s) for s in range(1, d)], kind="stable")

    masks: list[np.ndarray] = []
    weights: list[float] = []
    enumerated = np.zeros(d - 1, dtype=bool)
    remaining = budget
    for gi in order:
        s = gi + 1
        if enumerated[gi]:
            continue
        twin = d - s - 1
        count = int(binom(d, s)) + (int(binom(d, d - s)) if twin != gi else 0)
        if count > remaining:
            continue
        for size in {s, d - s}:
            per = _kernel_weight(d, size)
            idx = np.array(list(_combinations_indices(d, size)), dtype=object)
            for comb in idx:
                m = np.zeros(d, dtype=bool)
                m[list(comb)] = True
                masks.append(m)
                weights.append(per)
        enumerated[gi] = enumerated[twin] = True
        remaining -= count

    open_groups = np.flatnonzero(~enumerated)
    if open_groups.size and remaining > 0:
        probs = group_mass[open_groups] / group_mass[open_groups].sum()
        draws = rng.choice(open_groups, size=remaining // 2 * 2, p=probs)
        counts = {int(g): 0 for g in open_groups}
        sampled: list[tuple[int, np.ndarray]] = []
        for g in draws[: len(draws) // 2]:
            s = int(g) + 1
            m = np.zeros(d, dtype=bool)
            m[rng.choice(d, size=s, replace=False)] = True
            sampled.append((int(g), m))
            counts[int(g)] += 1
            complement_group = d - s - 1
            sampled.append((complement_group, ~m))
            counts[complement_group] += 1
        for g, m in sampled:
            masks.append(m)
            weights.append(group_mass[g] / max(counts[g], 1))
    return np.array(masks, dtype=bool), np.array(weights)


def _combinations_indices(d: int, s: int):
    from itertools import combinations

    return combinations(range(d), s)


def kernel_shap(
    model: Model,
    background: WeightedRows,
    x: np.ndarray,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Shapley approximation by kernel-weighted least squares on coalitions.

    Efficiency is enforced exactly by eliminating one unknown through the
    constraint sum(phi) = v(F) - v(empty). All proper nonempty coalitions are
    enumerated up to 13 varying features; beyond that, 2048 paired coalitions
    with the largest-weight sizes enumerated first.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    game = CoalitionGame(model, background, x)
    v0 = game.baseline()
    vf = game.full()

    varying = np.flatnonzero(varying_features(x, background))
    phi = np.zeros(d)
    if varying.size == 0:
        return phi
    if varying.size == 1:
        phi[varying[0]] = vf - v0
        return phi

    dv = varying.size
    if dv <= KERNEL_ENUM_MAX_FEATURES:
        sub_masks, weights = _enumerated_coalitions(dv)
    else:
        if rng is None:
            rng = np.random.default_rng(0)
        sub_masks, weights = _sampled_coalitions(dv, KERNEL_SAMPLED_COALITIONS, rng)

    full_masks = np.zeros((sub_masks.shape[0], d), dtype=bool)
    full_masks[:, varying] = sub_masks
    values = game.values(full_masks)

    z = sub_masks.astype(float)
    y = values - v0
    total = vf - v0
    # eliminate the last varying feature via the efficiency constraint
    z_red = z[:, :-1] - z[:, -1:]
    y_red = y - z[:, -1] * total
    zw = z_red * weights[:, None]
    gram = zw.T @ z_red
    rhs = zw.T @ y_red
    try:
        beta = np.linalg.solve(gram, rhs)
        if not np.all(np.isfinite(beta)):
            raise np.linalg.LinAlgError("non-finite solution")
    except np.linalg.LinAlgError:
        log.warning("kernel system singular at d=%d; applying ridge damping %.0e", dv, _RIDGE)
        beta = np.linalg.solve(gram + _RIDGE * np.eye(dv - 1), rhs)
    phi[varying[:-1]] = beta
    phi[varying[-1]] = total - beta.sum()
    return phi


def _split_indices(indices: np.ndarray):
    half = (len(indices) + 1) // 2
    return indices[:half], indices[half:]


def partition_shap(model: Model, background: WeightedRows, x: np.ndarray) -> np.ndarray:
    """Owen-value recursion over a balanced binary hierarchy of features.

    At each node the two child groups play a 2-player game inside every
    enclosing context, so the parent's allocation is split exactly and the
    total satisfies efficiency. At d=2 this is the Shapley value.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    game = CoalitionGame(model, background, x)
    phi = np.zeros(d)

    varying = np.flatnonzero(varying_features(x, background))
    if varying.size == 0:
        return phi

    def allocate(indices: np.ndarray, contexts: list[tuple[np.ndarray, float]]):
        if len(indices) == 1:
            j = int(indices[0])
            total = 0.0
            for ctx, w in contexts:
                with_j = ctx.copy()
                with_j[j] = True
                total += w * (game.value(with_j) - game.value(ctx))
            phi[j] = total
            return
        left, right = _split_indices(indices)
        left_ctx: list[tuple[np.ndarray, float]] = []
        right_ctx: list[tuple[np.ndarray, float]] = []
        for ctx, w in contexts:
            ctx_right = ctx.copy()
            ctx_right[right] = True
            left_ctx.append((ctx, w / 2.0))
            left_ctx.append((ctx_right, w / 2.0))
            ctx_left = ctx.copy()
            ctx_left[left] = True
            right_ctx.append((ctx, w / 2.0))
            right_ctx.append((ctx_left, w / 2.0))
        allocate(left, left_ctx)
        allocate(right, right_ctx)

    allocate(varying, [(np.zeros(d, dtype=bool), 1.0)])
    return phi
