"""xAI algorithms behind one contract: local attribution, global importance,
and a capability descriptor per method."""

from .base import (
    CoalitionGame,
    ExplainerDescriptor,
    ExplainInputs,
    Explanation,
    WeightedRows,
    varying_features,
    weighted_mean_abs,
)
from .perturbation import lime_attribution, permutation_importance, sage_importance
from .registry import explainer_ids, get_explainer, run_explainer
from .shapley import exact_shapley, kernel_shap, partition_shap, sampling_shapley
from .tree import saabas, tree_shap, tree_shap_approximation

__all__ = [
    "CoalitionGame",
    "ExplainerDescriptor",
    "ExplainInputs",
    "Explanation",
    "WeightedRows",
    "varying_features",
    "weighted_mean_abs",
    "lime_attribution",
    "permutation_importance",
    "sage_importance",
    "explainer_ids",
    "get_explainer",
    "run_explainer",
    "exact_shapley",
    "kernel_shap",
    "partition_shap",
    "sampling_shapley",
    "saabas",
    "tree_shap",
    "tree_shap_approximation",
]
