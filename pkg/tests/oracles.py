"""Independent brute-force oracles.

These deliberately share no code with the package implementations: coalitions
are frozensets walked with itertools, value functions are written from the
definitions, and everything is O(2^d) or worse. They exist so the package can
be checked against something that cannot share its bugs.
"""

from itertools import combinations
from math import comb

import numpy as np


def all_subsets(universe):
    universe = list(universe)
    for size in range(len(universe) + 1):
        for subset in combinations(universe, size):
            yield frozenset(subset)


def brute_shapley(value_fn, d):
    """Shapley values from the definition: phi_j averages marginal gains over
    all subsets, weighted 1 / (d * C(d-1, |S|))."""
    phi = []
    for j in range(d):
        others = [k for k in range(d) if k != j]
        total = 0.0
        for subset in all_subsets(others):
            weight = 1.0 / (d * comb(d - 1, len(subset)))
            total += weight * (value_fn(subset | {j}) - value_fn(subset))
        phi.append(total)
    return np.array(phi)


def interventional_value(predict_one, x, background_rows, background_weights=None):
    """Build v(S): weighted mean of predictions over explained/background composites."""
    x = np.asarray(x, dtype=float)
    rows = np.asarray(background_rows, dtype=float)
    if background_weights is None:
        background_weights = np.full(rows.shape[0], 1.0 / rows.shape[0])

    def value(subset):
        total = 0.0
        for row, weight in zip(rows, background_weights):
            composite = row.copy()
            for j in subset:
                composite[j] = x[j]
            total += weight * predict_one(composite)
        return total

    return value


def tree_conditional_value(root, x):
    """Build v(S) for one tree's cover-conditional expectation game.

    Features in S follow the explained row's path; features outside S take the
    cover-weighted average of both children.
    """
    x = np.asarray(x, dtype=float)

    def walk(node, subset):
        if node.split_feature is None:
            return node.leaf_value
        if node.split_feature in subset:
            child = node.left if x[node.split_feature] < node.threshold else node.right
            return walk(child, subset)
        total = node.left.cover + node.right.cover
        return (
            node.left.cover * walk(node.left, subset)
            + node.right.cover * walk(node.right, subset)
        ) / total

    return lambda subset: walk(root, subset)


def ensemble_conditional_value(ensemble, x):
    """Cover-conditional game of a whole boosted ensemble."""
    parts = [tree_conditional_value(tree, x) for tree in ensemble.trees]

    def value(subset):
        return ensemble.base_score + ensemble.learning_rate * sum(p(subset) for p in parts)

    return value


def loss_game_value(predict_one, eval_rows, eval_targets, background_rows, eval_weights=None):
    """Build v(S) = -(weighted mean squared error) with off-S features
    marginalized over the background rows (uniform weights)."""
    eval_rows = np.asarray(eval_rows, dtype=float)
    targets = np.asarray(eval_targets, dtype=float)
    bg = np.asarray(background_rows, dtype=float)
    if eval_weights is None:
        eval_weights = np.full(eval_rows.shape[0], 1.0 / eval_rows.shape[0])

    def value(subset):
        total = 0.0
        for x, y, w in zip(eval_rows, targets, eval_weights):
            pred = 0.0
            for row in bg:
                composite = row.copy()
                for j in subset:
                    composite[j] = x[j]
                pred += predict_one(composite) / bg.shape[0]
            total += w * (y - pred) ** 2
        return -total

    return value


def truth_table(d):
    """Every boolean row of width d, one per row."""
    rows = []
    for bits in range(2**d):
        rows.append([(bits >> (d - 1 - j)) & 1 for j in range(d)])
    return np.array(rows, dtype=float)
