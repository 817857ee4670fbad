"""Hierarchical score aggregation: per-test results roll up into five category
means, which average into one comprehensibility score per explainer; plus the
time/comprehensibility Pareto front and the pass/partial/fail classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInputError, InvalidParameterError
from .explainers import ExplainerDescriptor
from .functional_tests import CATEGORIES, TESTS, TestResult

FAILED_BELOW = 0.05
PASSED_FROM = 0.95


@dataclass(frozen=True)
class ScoreCard:
    """One explainer's aggregated results, percentages in [0, 100]."""

    explainer_id: str
    category_scores: dict[str, float]  # only categories with >= 1 completed test
    comprehensibility: float
    avg_time_s: float
    completed_tests: int
    portability: int


def build_scorecard(results: Sequence[TestResult], descriptor: ExplainerDescriptor) -> ScoreCard:
    """Aggregate one explainer's completed results into its scorecard.

    Skipped and errored results contribute to no mean; absent categories are
    excluded from the comprehensibility average rather than counted as zero.
    """
    ids = {r.explainer_id for r in results}
    if ids - {descriptor.id}:
        raise InvalidParameterError(f"results mix explainer ids: {sorted(ids)}")
    completed = [r for r in results if r.status == "completed"]
    if not completed:
        raise EmptyInputError(f"no completed tests for {descriptor.id}")

    by_category: dict[str, list[float]] = {}
    for r in completed:
        by_category.setdefault(TESTS[r.test_id].category, []).append(r.score)
    # sorted before averaging so float summation order cannot leak the
    # result ordering into the card
    category_scores = {
        cat: 100.0 * float(np.mean(sorted(by_category[cat])))
        for cat in CATEGORIES
        if cat in by_category
    }
    return ScoreCard(
        explainer_id=descriptor.id,
        category_scores=category_scores,
        comprehensibility=float(np.mean(list(category_scores.values()))),
        avg_time_s=float(np.mean(sorted(r.wall_time_s for r in completed))),
        completed_tests=len(completed),
        portability=descriptor.portability,
    )


def comprehensibility_of(category_scores: dict[str, float]) -> float:
    """Mean of the present category scores (the level-1 aggregate)."""
    if not category_scores:
        raise EmptyInputError("no category scores present")
    return float(np.mean(list(category_scores.values())))


def pareto_front(cards: Iterable[ScoreCard]) -> list[str]:
    """Ids not dominated in (lower avg time, higher comprehensibility).

    A card is dominated when another is at least as good on both axes and
    strictly better on one; exact ties on both axes are all kept.
    """
    cards = list(cards)
    if not cards:
        raise EmptyInputError("need at least one scorecard")
    front = []
    for a in cards:
        dominated = any(
            b.avg_time_s <= a.avg_time_s
            and b.comprehensibility >= a.comprehensibility
            and (b.avg_time_s < a.avg_time_s or b.comprehensibility > a.comprehensibility)
            for b in cards
        )
        if not dominated:
            front.append(a.explainer_id)
    return front


def classify_result(score: float) -> str:
    """Classify one test score: failed (< 0.05), partial (< 0.95), or passed."""
    if not 0.0 <= score <= 1.0:
        raise InvalidParameterError(f"score {score} outside [0, 1]")
    if score < FAILED_BELOW:
        return "failed"
    if score < PASSED_FROM:
        return "partial"
    return "passed"
