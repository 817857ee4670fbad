"""Glass-box models behind one batch prediction contract.

Four kinds: gradient-boosted CART ensembles (with exposed structure), a tiny
rectifier MLP, scripted closed-form functions, and the corrupted router used
by the adversarial-attack test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import formulas
from .datasets import Dataset
from .errors import ArityMismatchError, InvalidParameterError, StructureMissingError

MODEL_KINDS = ("tree_ensemble", "mlp", "scripted", "corrupted")


@dataclass(frozen=True)
class TreeNode:
    """One CART node; leaves have split_feature None.

    ``cover`` is the number of training rows reaching the node and
    ``node_mean`` the mean training target there; both are consumed by the
    tree-path explainers.
    """

    split_feature: Optional[int]
    threshold: float
    left: Optional["TreeNode"]
    right: Optional["TreeNode"]
    leaf_value: float
    cover: int
    node_mean: float

    @property
    def is_leaf(self) -> bool:
        return self.split_feature is None


@dataclass(frozen=True)
class TreeEnsemble:
    trees: tuple[TreeNode, ...]
    base_score: float
    learning_rate: float


@dataclass
class MlpModel:
    """d -> hidden -> 1 rectifier network with its training log."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float
    final_loss: float


@dataclass(frozen=True)
class Model:
    """Uniform prediction contract: a deterministic batch predictor."""

    kind: str
    arity: int
    _predict: Callable[[np.ndarray], np.ndarray]
    structure_handle: Optional[TreeEnsemble] = None
    mlp_handle: Optional[MlpModel] = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise InvalidParameterError(f"unknown model kind {self.kind!r}")
        if (self.structure_handle is not None) != (self.kind == "tree_ensemble"):
            raise InvalidParameterError("structure_handle present iff kind == tree_ensemble")

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[None, :]
        if x.shape[1] != self.arity:
            raise ArityMismatchError(f"model expects {self.arity} features, got {x.shape[1]}")
        return self._predict(x)

    def predict_one(self, x: np.ndarray) -> float:
        return float(self.predict(np.asarray(x, dtype=float)[None, :])[0])

    def require_structure(self) -> TreeEnsemble:
        if self.structure_handle is None:
            raise StructureMissingError(f"model kind {self.kind!r} exposes no tree structure")
        return self.structure_handle


# -- CART + gradient boosting --------------------------------------------------


def _best_split(x: np.ndarray, y: np.ndarray, min_rows: int):
    """Return (gain, feature, threshold) of the best variance-reducing split.

    Ties broken by lowest feature index, then lowest threshold; returns None
    when no split reduces the squared error.
    """
    n, d = x.shape
    parent_sse = float(np.sum(y * y) - (np.sum(y) ** 2) / n)
    best = None
    for j in range(d):
        order = np.argsort(x[:, j], kind="stable")
        xs = x[order, j]
        ys = y[order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        total_sum, total_sq = csum[-1], csq[-1]
        # split after position i: left = [0..i], right = (i..n)
        cut = np.flatnonzero(xs[:-1] < xs[1:])
        if cut.size == 0:
            continue
        left_n = cut + 1
        right_n = n - left_n
        ok = (left_n >= min_rows) & (right_n >= min_rows)
        if not np.any(ok):
            continue
        cut = cut[ok]
        left_n, right_n = left_n[ok], right_n[ok]
        l_sum, l_sq = csum[cut], csq[cut]
        r_sum, r_sq = total_sum - l_sum, total_sq - l_sq
        child_sse = (l_sq - l_sum**2 / left_n) + (r_sq - r_sum**2 / right_n)
        gains = parent_sse - child_sse
        # argmax takes the first maximum; thresholds ascend with cut position,
        # so equal gains within a feature resolve to the lowest threshold, and
        # the strict > below resolves cross-feature ties to the lowest index.
        k = int(np.argmax(gains))
        gain = float(gains[k])
        thr = float((xs[cut[k]] + xs[cut[k] + 1]) / 2.0)
        if best is None or gain > best[0]:
            best = (gain, j, thr)
    if best is None or best[0] <= 0.0:
        return None
    return best


def _grow(x: np.ndarray, y: np.ndarray, depth: int, min_rows: int) -> TreeNode:
    mean = float(y.mean())
    cover = len(y)
    if depth <= 0 or cover < 2 * min_rows:
        return TreeNode(None, 0.0, None, None, mean, cover, mean)
    split = _best_split(x, y, min_rows)
    if split is None:
        return TreeNode(None, 0.0, None, None, mean, cover, mean)
    _, j, thr = split
    mask = x[:, j] < thr
    left = _grow(x[mask], y[mask], depth - 1, min_rows)
    right = _grow(x[~mask], y[~mask], depth - 1, min_rows)
    return TreeNode(j, thr, left, right, mean, cover, mean)


def fit_cart(ds: Dataset, max_depth: int, min_rows: int = 1) -> TreeNode:
    """Greedy squared-error CART; leaves store mean target, cover, node mean."""
    if max_depth < 0 or min_rows < 1:
        raise InvalidParameterError("need max_depth >= 0 and min_rows >= 1")
    if ds.n < 2 * min_rows:
        raise InvalidParameterError(f"need n >= 2*min_rows, got n={ds.n}")
    return _grow(ds.features, ds.targets, max_depth, min_rows)


def predict_tree(node: TreeNode, x: np.ndarray) -> np.ndarray:
    """Vectorized root-to-leaf routing (feature < threshold goes left)."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape[0])

    def walk(n: TreeNode, idx: np.ndarray):
        if n.is_leaf:
            out[idx] = n.leaf_value
            return
        goes_left = x[idx, n.split_feature] < n.threshold
        walk(n.left, idx[goes_left])
        walk(n.right, idx[~goes_left])

    walk(node, np.arange(x.shape[0]))
    return out


def predict_ensemble(ens: TreeEnsemble, x: np.ndarray) -> np.ndarray:
    out = np.full(np.asarray(x).shape[0], ens.base_score)
    for tree in ens.trees:
        out += ens.learning_rate * predict_tree(tree, x)
    return out


def fit_gbt(ds: Dataset, n_trees: int, max_depth: int, learning_rate: float) -> Model:
    """Gradient-boosted CART regression: each tree fits the current residuals."""
    if n_trees < 1:
        raise InvalidParameterError("need n_trees >= 1")
    base = float(ds.targets.mean())
    residuals = ds.targets - base
    trees: list[TreeNode] = []
    for _ in range(n_trees):
        stump = _grow(ds.features, residuals, max_depth, 1)
        trees.append(stump)
        residuals = residuals - learning_rate * predict_tree(stump, ds.features)
    ensemble = TreeEnsemble(tuple(trees), base, learning_rate)
    return Model(
        kind="tree_ensemble",
        arity=ds.d,
        _predict=lambda x, e=ensemble: predict_ensemble(e, x),
        structure_handle=ensemble,
        label=f"gbt(trees={n_trees},depth={max_depth},lr={learning_rate})",
    )


# -- MLP -----------------------------------------------------------------------


def mlp_predict(params: MlpModel, x: np.ndarray) -> np.ndarray:
    hidden = np.maximum(x @ params.w1 + params.b1, 0.0)
    return hidden @ params.w2 + params.b2


def mlp_loss_and_grads(params: MlpModel, x: np.ndarray, y: np.ndarray):
    """Mean squared error and its gradients for one batch."""
    n = x.shape[0]
    pre = x @ params.w1 + params.b1
    hidden = np.maximum(pre, 0.0)
    pred = hidden @ params.w2 + params.b2
    err = pred - y
    loss = float(np.mean(err**2))

    d_pred = 2.0 * err / n
    g_w2 = hidden.T @ d_pred
    g_b2 = float(np.sum(d_pred))
    d_hidden = np.outer(d_pred, params.w2) * (pre > 0.0)
    g_w1 = x.T @ d_hidden
    g_b1 = d_hidden.sum(axis=0)
    return loss, (g_w1, g_b1, g_w2, g_b2)


def fit_mlp(
    ds: Dataset,
    hidden: int,
    epochs: int,
    step: float,
    rng: np.random.Generator,
    batch_size: int = 256,
) -> Model:
    """Mini-batch gradient descent on squared error; final loss is recorded."""
    if hidden < 1:
        raise InvalidParameterError("need hidden >= 1")
    d = ds.d
    params = MlpModel(
        w1=rng.normal(0.0, np.sqrt(2.0 / d), size=(d, hidden)),
        b1=np.zeros(hidden),
        w2=rng.normal(0.0, np.sqrt(1.0 / hidden), size=hidden),
        b2=0.0,
        final_loss=float("nan"),
    )
    x, y = ds.features, ds.targets
    for _ in range(epochs):
        order = rng.permutation(ds.n)
        for start in range(0, ds.n, batch_size):
            idx = order[start : start + batch_size]
            _, (g_w1, g_b1, g_w2, g_b2) = mlp_loss_and_grads(params, x[idx], y[idx])
            params.w1 -= step * g_w1
            params.b1 -= step * g_b1
            params.w2 -= step * g_w2
            params.b2 -= step * g_b2
    params.final_loss, _ = mlp_loss_and_grads(params, x, y)
    return Model(
        kind="mlp",
        arity=d,
        _predict=lambda q, p=params: mlp_predict(p, q),
        mlp_handle=params,
        label=f"mlp(hidden={hidden},epochs={epochs},step={step},loss={params.final_loss:.5f})",
    )


# -- scripted + corrupted --------------------------------------------------------


def scripted(formula_id: str, arity: int) -> Model:
    """Closed-form model evaluating a registered formula directly."""
    if not formulas.accepts_arity(formula_id, arity):
        raise ArityMismatchError(f"{formula_id} does not accept arity {arity}")
    return Model(
        kind="scripted",
        arity=arity,
        _predict=lambda x, f=formula_id: formulas.evaluate(f, x),
        label=f"scripted({formula_id})",
    )


def scripted_from(fn: Callable[[np.ndarray], np.ndarray], arity: int, label: str) -> Model:
    """Wrap an arbitrary vectorized function as a scripted model."""
    return Model(kind="scripted", arity=arity, _predict=fn, label=label)


def _row_key(row: np.ndarray) -> bytes:
    return np.ascontiguousarray(row, dtype=float).tobytes()


def corrupted_model(train_rows: np.ndarray, biased: Model, fair: Model) -> Model:
    """Route exact training-row matches to the biased model, everything else to fair."""
    train_rows = np.asarray(train_rows, dtype=float)
    if biased.arity != fair.arity or train_rows.shape[1] != biased.arity:
        raise ArityMismatchError("biased and fair models must share arity with train_rows")
    members = {_row_key(row) for row in train_rows}

    def predict(x: np.ndarray) -> np.ndarray:
        out = fair.predict(x)
        in_set = np.fromiter(
            (_row_key(row) in members for row in x), dtype=bool, count=x.shape[0]
        )
        if np.any(in_set):
            out[in_set] = biased.predict(x[in_set])
        return out

    return Model(
        kind="corrupted",
        arity=biased.arity,
        _predict=predict,
        label=f"corrupted(biased={biased.label},fair={fair.label})",
    )
