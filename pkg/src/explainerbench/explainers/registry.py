"""The explainer roster: capability descriptors plus one uniform entry point.

Each entry turns a model and the test's evaluation designs into an
:class:`Explanation` carrying exactly the outputs its descriptor declares.
Global importance for attribution methods is the weighted mean of absolute
local attributions over the test's evaluation design.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import UnknownIdError
from ..models import Model
from . import perturbation, shapley, tree
from .base import (
    CoalitionGame,
    ExplainerDescriptor,
    Explanation,
    ExplainInputs,
    weighted_mean_abs,
)

ALL_KINDS = frozenset({"tree_ensemble", "mlp", "scripted", "corrupted"})
TREE_ONLY = frozenset({"tree_ensemble"})


@dataclass(frozen=True)
class ExplainerEntry:
    descriptor: ExplainerDescriptor
    run: Callable[[Model, ExplainInputs, np.random.Generator], Explanation]


def _interventional_baseline(model: Model, inputs: ExplainInputs) -> float:
    return float(model.predict(inputs.background.rows) @ inputs.background.weights)


def _from_attributions(entry_id: str, baseline: float, rows: np.ndarray, inputs: ExplainInputs):
    return Explanation(
        baseline=baseline,
        produced_by=entry_id,
        local_attributions=rows,
        global_importance=weighted_mean_abs(rows, inputs.attr_rows.weights),
    )


def _run_exact_shapley(model, inputs, rng):
    phi = np.array(
        [shapley.exact_shapley(model, inputs.background, x) for x in inputs.attr_rows.rows]
    )
    return Explanation(
        baseline=_interventional_baseline(model, inputs),
        produced_by="exact_shapley_values",
        global_importance=weighted_mean_abs(phi, inputs.attr_rows.weights),
    )


def _run_kernel_shap(model, inputs, rng):
    phi = np.array(
        [shapley.kernel_shap(model, inputs.background, x, rng) for x in inputs.attr_rows.rows]
    )
    return _from_attributions(
        "kernel_shap", _interventional_baseline(model, inputs), phi, inputs
    )


def _run_partition(model, inputs, rng):
    phi = np.array(
        [shapley.partition_shap(model, inputs.background, x) for x in inputs.attr_rows.rows]
    )
    return _from_attributions("partition", _interventional_baseline(model, inputs), phi, inputs)


def _run_permutation(model, inputs, rng):
    importance = perturbation.permutation_importance(model, inputs.eval_rows, rng)
    return Explanation(
        baseline=float(np.mean(model.predict(inputs.eval_rows))),
        produced_by="permutation",
        global_importance=importance,
    )


def _run_permutation_partition(model, inputs, rng):
    phi = np.array(
        [shapley.partition_shap(model, inputs.background, x) for x in inputs.attr_rows.rows]
    )
    importance = perturbation.permutation_importance(model, inputs.eval_rows, rng)
    return Explanation(
        baseline=_interventional_baseline(model, inputs),
        produced_by="permutation_partition",
        local_attributions=phi,
        global_importance=importance,
    )


def _run_lime(model, inputs, rng):
    phi = np.array(
        [
            perturbation.lime_attribution(model, inputs.background, x, inputs.lime_samples, rng)
            for x in inputs.attr_rows.rows
        ]
    )
    return _from_attributions("lime", _interventional_baseline(model, inputs), phi, inputs)


def _run_sage(model, inputs, rng):
    if inputs.loss_rows is not None:
        rows, targets = inputs.loss_rows.rows, inputs.loss_targets
        weights = inputs.loss_rows.weights
    else:
        rows, targets, weights = inputs.eval_rows, inputs.eval_targets, None
        if targets is not None and rows.shape[0] > inputs.sage_eval_rows:
            # the loss game walks every permutation over all rows; bound the set
            pick = rng.permutation(rows.shape[0])[: inputs.sage_eval_rows]
            rows, targets = rows[pick], targets[pick]
    importance = perturbation.sage_importance(
        model,
        rows,
        targets,
        inputs.background,
        inputs.sage_permutations,
        rng,
        eval_weights=weights,
    )
    return Explanation(
        baseline=_interventional_baseline(model, inputs),
        produced_by="sage",
        global_importance=importance,
    )


def _run_saabas(model, inputs, rng):
    rows = []
    bias = 0.0
    for x in inputs.attr_rows.rows:
        phi, bias = tree.saabas(model, x)
        rows.append(phi)
    rows = np.array(rows)
    return _from_attributions("saabas", bias, rows, inputs)


def _run_tree_shap(model, inputs, rng):
    rows = []
    baseline = 0.0
    for x in inputs.attr_rows.rows:
        phi, baseline = tree.tree_shap(model, x)
        rows.append(phi)
    rows = np.array(rows)
    return _from_attributions("tree_shap", baseline, rows, inputs)


def _run_tree_shap_approximation(model, inputs, rng):
    rows = []
    baseline = 0.0
    for x in inputs.attr_rows.rows:
        phi, baseline = tree.tree_shap_approximation(model, inputs.background, x)
        rows.append(phi)
    rows = np.array(rows)
    return _from_attributions("tree_shap_approximation", baseline, rows, inputs)


def _run_baseline_random(model, inputs, rng):
    d = model.arity
    return Explanation(
        baseline=0.0,
        produced_by="baseline_random",
        local_attributions=rng.random((inputs.attr_rows.rows.shape[0], d)),
        global_importance=rng.random(d),
    )


_ENTRIES: dict[str, ExplainerEntry] = {}


def _register(descriptor: ExplainerDescriptor, run) -> None:
    _ENTRIES[descriptor.id] = ExplainerEntry(descriptor, run)


_register(
    ExplainerDescriptor(
        id="baseline_random",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset(),
        perturbation_based=False,
        normalized_output=True,
    ),
    _run_baseline_random,
)
_register(
    ExplainerDescriptor(
        id="exact_shapley_values",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"importance"}),
        required_inputs=frozenset({"predict_fn", "background"}),
        perturbation_based=True,
        max_features=shapley.EXACT_MAX_FEATURES,
    ),
    _run_exact_shapley,
)
_register(
    ExplainerDescriptor(
        id="kernel_shap",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset({"predict_fn", "background"}),
        perturbation_based=True,
    ),
    _run_kernel_shap,
)
_register(
    ExplainerDescriptor(
        id="lime",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset({"predict_fn", "background"}),
        perturbation_based=True,
    ),
    _run_lime,
)
_register(
    ExplainerDescriptor(
        id="partition",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset({"predict_fn", "background"}),
        perturbation_based=True,
    ),
    _run_partition,
)
_register(
    ExplainerDescriptor(
        id="permutation",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"importance"}),
        required_inputs=frozenset({"predict_fn", "background"}),
        perturbation_based=True,
    ),
    _run_permutation,
)
_register(
    ExplainerDescriptor(
        id="permutation_partition",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset({"predict_fn", "background"}),
        perturbation_based=True,
    ),
    _run_permutation_partition,
)
_register(
    ExplainerDescriptor(
        id="saabas",
        supported_kinds=TREE_ONLY,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset({"structure"}),
        perturbation_based=False,
    ),
    _run_saabas,
)
_register(
    ExplainerDescriptor(
        id="sage",
        supported_kinds=ALL_KINDS,
        outputs=frozenset({"importance"}),
        required_inputs=frozenset({"predict_fn", "background", "train_targets"}),
        perturbation_based=True,
    ),
    _run_sage,
)
_register(
    ExplainerDescriptor(
        id="tree_shap",
        supported_kinds=TREE_ONLY,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset({"structure", "background"}),
        perturbation_based=False,
    ),
    _run_tree_shap,
)
_register(
    ExplainerDescriptor(
        id="tree_shap_approximation",
        supported_kinds=TREE_ONLY,
        outputs=frozenset({"attribution", "importance"}),
        required_inputs=frozenset({"structure", "background"}),
        perturbation_based=False,
    ),
    _run_tree_shap_approximation,
)


def explainer_ids() -> tuple[str, ...]:
    return tuple(sorted(_ENTRIES))


def get_explainer(explainer_id: str) -> ExplainerEntry:
    try:
        return _ENTRIES[explainer_id]
    except KeyError:
        raise UnknownIdError(f"unknown explainer id {explainer_id!r}") from None


def run_explainer(
    explainer_id: str, model: Model, inputs: ExplainInputs, rng: np.random.Generator
) -> Explanation:
    entry = get_explainer(explainer_id)
    if model.kind not in entry.descriptor.supported_kinds:
        from ..errors import StructureMissingError

        raise StructureMissingError(
            f"{explainer_id} does not support model kind {model.kind!r}"
        )
    return entry.run(model, inputs, rng)
