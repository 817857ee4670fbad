"""Experiment scheduler and results persistence.

One run executes the eligible (test x explainer) cross product exactly once,
each experiment with a child stream derived purely from (master seed, test id,
explainer id), then writes results.json (source of truth) plus csv/markdown
projections.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import secrets
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import jsonschema

from . import __version__
from .errors import ArchiveSchemaError, UnknownIdError
from .explainers.registry import explainer_ids, get_explainer
from .functional_tests import TESTS, DataPaths, TestResult, run_experiment, test_ids
from .scoring import ScoreCard, build_scorecard, pareto_front

RESULTS_FILENAME = "results.json"
CSV_FILENAME = "scores.csv"
MD_FILENAME = "results.md"
OUTPUT_DIR_ENV = "EXPLAINERBENCH_OUT"
DEFAULT_OUTPUT_DIR = "bench-results"

CSV_COLUMNS = (
    "explainer",
    "time_s",
    "tests",
    "fidelity",
    "fragility",
    "stability",
    "simplicity",
    "stress",
    "comprehensibility",
)

RESULTS_SCHEMA = {
    "type": "object",
    "required": ["meta", "experiments", "scorecards", "pareto"],
    "properties": {
        "meta": {
            "type": "object",
            "required": ["master_seed", "seed_policy", "started_at", "version"],
            "properties": {
                "master_seed": {"type": "integer"},
                "seed_policy": {"enum": ["entropy", "fixed"]},
                "started_at": {"type": "string"},
                "version": {"type": "string"},
                "manifest": {
                    "type": "object",
                    "properties": {
                        "selected_tests": {"type": "array", "items": {"type": "string"}},
                        "selected_explainers": {"type": "array", "items": {"type": "string"}},
                        "parallelism": {"type": "integer"},
                        "data_paths": {"type": "object"},
                    },
                },
            },
        },
        "experiments": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["test", "explainer", "status", "time_s", "seed"],
                "properties": {
                    "test": {"type": "string"},
                    "explainer": {"type": "string"},
                    "status": {"enum": ["completed", "skipped_ineligible", "errored"]},
                    "score": {"type": "number", "minimum": 0, "maximum": 1},
                    "time_s": {"type": "number", "minimum": 0},
                    "seed": {"type": "integer"},
                    "output": {"enum": ["importance", "attribution"]},
                    "message": {"type": "string"},
                },
            },
        },
        "scorecards": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "explainer",
                    "categories",
                    "comprehensibility",
                    "avg_time_s",
                    "completed",
                    "portability",
                ],
                "properties": {
                    "explainer": {"type": "string"},
                    "categories": {
                        "type": "object",
                        "additionalProperties": {"type": "number"},
                    },
                    "comprehensibility": {"type": "number"},
                    "avg_time_s": {"type": "number"},
                    "completed": {"type": "integer"},
                    "portability": {"type": "integer", "minimum": 1, "maximum": 4},
                    "supported_models": {"type": "array", "items": {"type": "string"}},
                    "outputs": {"type": "array", "items": {"type": "string"}},
                    "required_inputs": {"type": "array", "items": {"type": "string"}},
                    "perturbation_based": {"type": "boolean"},
                },
            },
        },
        "pareto": {"type": "array", "items": {"type": "string"}},
    },
}


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce one run; recorded verbatim in the archive."""

    seed_policy: str = "entropy"  # default: no fixed seed
    master_seed: Optional[int] = None  # drawn and recorded under entropy policy
    selected_tests: tuple[str, ...] = ()
    selected_explainers: tuple[str, ...] = ()
    parallelism: int = 0  # 0 = all available cores
    data_paths: DataPaths = field(default_factory=DataPaths)

    def resolve(self) -> "ResolvedManifest":
        tests = self.selected_tests or test_ids()
        explainers = self.selected_explainers or explainer_ids()
        for t in tests:
            if t not in TESTS:
                raise UnknownIdError(f"unknown test id {t!r}")
        for e in explainers:
            get_explainer(e)
        seed = self.master_seed
        if seed is None:
            if self.seed_policy == "fixed":
                raise UnknownIdError("fixed seed policy needs a master seed")
            seed = secrets.randbits(63)
        jobs = self.parallelism if self.parallelism > 0 else (os.cpu_count() or 1)
        return ResolvedManifest(
            seed_policy=self.seed_policy,
            master_seed=seed,
            tests=tuple(tests),
            explainers=tuple(explainers),
            jobs=jobs,
            data_paths=self.data_paths,
        )


@dataclass(frozen=True)
class ResolvedManifest:
    seed_policy: str
    master_seed: int
    tests: tuple[str, ...]
    explainers: tuple[str, ...]
    jobs: int
    data_paths: DataPaths


def child_seed(master_seed: int, test_id: str, explainer_id: str) -> int:
    """Pure function of (master seed, test id, explainer id)."""
    digest = hashlib.sha256(f"{master_seed}|{test_id}|{explainer_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _worker(args) -> list[TestResult]:
    test_id, explainer_id, seed, paths = args
    return run_experiment(TESTS[test_id], explainer_id, seed, paths)


def run_suite(manifest: RunManifest) -> dict:
    """Execute the suite per the manifest and return the archive document."""
    resolved = manifest.resolve()
    started_at = datetime.now(timezone.utc).isoformat()
    tasks = [
        (t, e, child_seed(resolved.master_seed, t, e), resolved.data_paths)
        for t in resolved.tests
        for e in resolved.explainers
    ]
    results: list[TestResult] = []
    if resolved.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=resolved.jobs) as pool:
            for batch in pool.map(_worker, tasks):
                results.extend(batch)
    else:
        for task in tasks:
            results.extend(_worker(task))

    # collection order is execution-independent: rebuild in manifest order
    order = {(t, e): i for i, (t, e, _, _) in enumerate(tasks)}
    results.sort(key=lambda r: (order[(r.test_id, r.explainer_id)], r.output or ""))

    cards: list[ScoreCard] = []
    for explainer_id in resolved.explainers:
        own = [r for r in results if r.explainer_id == explainer_id]
        if any(r.status == "completed" for r in own):
            cards.append(build_scorecard(own, get_explainer(explainer_id).descriptor))

    return _archive_document(resolved, started_at, results, cards)


def _archive_document(resolved, started_at, results, cards) -> dict:
    experiments = []
    for r in results:
        entry = {
            "test": r.test_id,
            "explainer": r.explainer_id,
            "status": r.status,
            "time_s": round(r.wall_time_s, 6),
            "seed": r.seed_used,
        }
        if r.score is not None:
            entry["score"] = r.score
        if r.output is not None:
            entry["output"] = r.output
        if r.message is not None:
            entry["message"] = r.message
        experiments.append(entry)

    scorecards = []
    for card in cards:
        desc = get_explainer(card.explainer_id).descriptor
        scorecards.append(
            {
                "explainer": card.explainer_id,
                "categories": {k: round(v, 10) for k, v in card.category_scores.items()},
                "comprehensibility": round(card.comprehensibility, 10),
                "avg_time_s": round(card.avg_time_s, 6),
                "completed": card.completed_tests,
                "portability": card.portability,
                "supported_models": sorted(desc.supported_kinds),
                "outputs": sorted(desc.outputs),
                "required_inputs": sorted(desc.required_inputs),
                "perturbation_based": desc.perturbation_based,
            }
        )

    archive = {
        "meta": {
            "master_seed": resolved.master_seed,
            "seed_policy": resolved.seed_policy,
            "started_at": started_at,
            "version": __version__,
            "manifest": {
                "selected_tests": list(resolved.tests),
                "selected_explainers": list(resolved.explainers),
                "parallelism": resolved.jobs,
                "data_paths": {
                    "compas": resolved.data_paths.compas,
                    "mnist_images": resolved.data_paths.mnist_images,
                    "mnist_labels": resolved.data_paths.mnist_labels,
                },
            },
        },
        "experiments": experiments,
        "scorecards": scorecards,
        "pareto": sorted(pareto_front(cards)) if cards else [],
    }
    validate_archive(archive)
    return archive


def validate_archive(archive: dict) -> None:
    try:
        jsonschema.validate(archive, RESULTS_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ArchiveSchemaError(f"archive invalid at {path}: {exc.message}") from exc


def any_errored(archive: dict) -> bool:
    return any(e["status"] == "errored" for e in archive["experiments"])


# -- serialization ----------------------------------------------------------------


def _fmt_pct(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.1f}"


def _card_row(card: dict) -> list[str]:
    cats = card["categories"]
    return [
        card["explainer"],
        f"{card['avg_time_s']:.3f}",
        str(card["completed"]),
        *[_fmt_pct(cats.get(c)) for c in ("fidelity", "fragility", "stability", "simplicity", "stress")],
        _fmt_pct(card["comprehensibility"]),
    ]


def emit_csv(archive: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for card in archive["scorecards"]:
        writer.writerow(_card_row(card))
    return buf.getvalue()


def emit_markdown(archive: dict) -> str:
    header = (
        "| xAI algorithm | Time [s] | Tests | Fidelity | Fragility | Stability "
        "| Simplicity | Stress | Comprehensibility |"
    )
    sep = "|" + "---|" * 9
    lines = [header, sep]
    for card in archive["scorecards"]:
        lines.append("| " + " | ".join(_card_row(card)) + " |")
    lines.append("")
    lines.append("Pareto front: " + (", ".join(archive["pareto"]) or "(empty)"))
    return "\n".join(lines) + "\n"


def emit_json(archive: dict) -> str:
    return json.dumps(archive, indent=2, sort_keys=True) + "\n"


def emit_report(archive: dict, format: str) -> str:
    validate_archive(archive)
    if format == "json":
        return emit_json(archive)
    if format == "csv":
        return emit_csv(archive)
    if format == "md":
        return emit_markdown(archive)
    raise UnknownIdError(f"unknown report format {format!r}")


def write_archive(archive: dict, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / RESULTS_FILENAME).write_text(emit_json(archive))
    (out / CSV_FILENAME).write_text(emit_csv(archive))
    (out / MD_FILENAME).write_text(emit_markdown(archive))
    return out / RESULTS_FILENAME


def load_archive(in_dir: str | Path) -> dict:
    path = Path(in_dir) / RESULTS_FILENAME
    if not path.exists():
        raise ArchiveSchemaError(f"no {RESULTS_FILENAME} in {in_dir}")
    try:
        archive = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ArchiveSchemaError(f"{path}: {exc}") from exc
    validate_archive(archive)
    return archive
