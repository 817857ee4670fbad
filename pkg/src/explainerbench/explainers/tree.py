"""Attribution methods that read gradient-boosted tree structure directly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..models import Model, TreeEnsemble, TreeNode, predict_tree
from .base import WeightedRows


def saabas_attribution(ens: TreeEnsemble, x: np.ndarray, d: int):
    """Path decomposition: each split credits its change in node mean.

    Returns (phi, bias); bias plus the attributions equals the prediction.
    Fast but order-dependent, which is exactly the inconsistency the fidelity
    tests expose.
    """
    x = np.asarray(x, dtype=float)
    phi = np.zeros(d)
    bias = ens.base_score
    for tree in ens.trees:
        bias += ens.learning_rate * tree.node_mean
        node = tree
        while not node.is_leaf:
            child = node.left if x[node.split_feature] < node.threshold else node.right
            phi[node.split_feature] += ens.learning_rate * (child.node_mean - node.node_mean)
            node = child
    return phi, bias


def recentered_saabas_attribution(
    ens: TreeEnsemble, background: WeightedRows, x: np.ndarray, d: int
):
    """Saabas walk re-centered so the bias is the background-mean prediction.

    The shift between each tree's root mean and its background mean lands on
    the root split feature; the decomposition stays order-dependent and does
    not satisfy symmetry.
    """
    x = np.asarray(x, dtype=float)
    phi = np.zeros(d)
    bias = ens.base_score
    for tree in ens.trees:
        bg_mean = float(predict_tree(tree, background.rows) @ background.weights)
        bias += ens.learning_rate * bg_mean
        current = bg_mean
        node = tree
        while not node.is_leaf:
            child = node.left if x[node.split_feature] < node.threshold else node.right
            phi[node.split_feature] += ens.learning_rate * (child.node_mean - current)
            current = child.node_mean
            node = child
    return phi, bias


@dataclass
class _PathElement:
    feature: int
    zero_fraction: float
    one_fraction: float
    pweight: float


def _extend(path: list[_PathElement], pz: float, po: float, pi: int) -> list[_PathElement]:
    out = [_PathElement(e.feature, e.zero_fraction, e.one_fraction, e.pweight) for e in path]
    length = len(out)
    out.append(_PathElement(pi, pz, po, 1.0 if length == 0 else 0.0))
    for i in range(length - 1, -1, -1):
        out[i + 1].pweight += po * out[i].pweight * (i + 1) / (length + 1)
        out[i].pweight = pz * out[i].pweight * (length - i) / (length + 1)
    return out


def _unwind(path: list[_PathElement], i: int) -> list[_PathElement]:
    last = len(path) - 1
    po = path[i].one_fraction
    pz = path[i].zero_fraction
    out = [_PathElement(e.feature, e.zero_fraction, e.one_fraction, e.pweight) for e in path[:-1]]
    n = path[last].pweight
    for j in range(last - 1, -1, -1):
        if po != 0.0:
            t = out[j].pweight
            out[j].pweight = n * (last + 1) / ((j + 1) * po)
            n = t - out[j].pweight * pz * (last - j) / (last + 1)
        else:
            out[j].pweight = out[j].pweight * (last + 1) / (pz * (last - j))
    for j in range(i, last):
        out[j].feature = path[j + 1].feature
        out[j].zero_fraction = path[j + 1].zero_fraction
        out[j].one_fraction = path[j + 1].one_fraction
    return out


def _tree_shap_single(node: TreeNode, x: np.ndarray, phi: np.ndarray, scale: float):
    """Path-dependent polynomial recursion over one tree.

    Maintains the weighted subset-size polynomial along the current path;
    cover ratios act as the conditioning probabilities of the cold branches.
    """

    def recurse(n: TreeNode, path: list[_PathElement], pz: float, po: float, pi: int):
        path = _extend(path, pz, po, pi)
        if n.is_leaf:
            for i in range(1, len(path)):
                w = sum(e.pweight for e in _unwind(path, i))
                el = path[i]
                phi[el.feature] += w * (el.one_fraction - el.zero_fraction) * n.leaf_value * scale
            return
        if x[n.split_feature] < n.threshold:
            hot, cold = n.left, n.right
        else:
            hot, cold = n.right, n.left
        iz = io = 1.0
        k = next(
            (idx for idx in range(1, len(path)) if path[idx].feature == n.split_feature), None
        )
        if k is not None:
            iz, io = path[k].zero_fraction, path[k].one_fraction
            path = _unwind(path, k)
        recurse(hot, path, iz * hot.cover / n.cover, io, n.split_feature)
        recurse(cold, path, iz * cold.cover / n.cover, 0.0, n.split_feature)

    recurse(node, [], 1.0, 1.0, -1)


def _cover_expectation(node: TreeNode) -> float:
    if node.is_leaf:
        return node.leaf_value
    total = node.left.cover + node.right.cover
    return (
        node.left.cover * _cover_expectation(node.left)
        + node.right.cover * _cover_expectation(node.right)
    ) / total


def tree_shap_attribution(ens: TreeEnsemble, x: np.ndarray, d: int):
    """Exact Shapley values of each tree's cover-conditional expectation game."""
    x = np.asarray(x, dtype=float)
    phi = np.zeros(d)
    baseline = ens.base_score
    for tree in ens.trees:
        baseline += ens.learning_rate * _cover_expectation(tree)
        _tree_shap_single(tree, x, phi, ens.learning_rate)
    return phi, baseline


def saabas(model: Model, x: np.ndarray):
    ens = model.require_structure()
    return saabas_attribution(ens, x, model.arity)


def tree_shap(model: Model, x: np.ndarray):
    ens = model.require_structure()
    return tree_shap_attribution(ens, x, model.arity)


def tree_shap_approximation(model: Model, background: WeightedRows, x: np.ndarray):
    ens = model.require_structure()
    return recentered_saabas_attribution(ens, background, x, model.arity)
