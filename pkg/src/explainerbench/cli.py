"""Command-line surface: run the suite, re-emit reports, print the Pareto
front, and list the registries.

Exit codes: 0 when no experiment errored, 1 when any errored (or an archive
is unusable), 2 on usage errors such as unknown ids.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ArchiveSchemaError, BenchmarkError, UnknownIdError
from .explainers.registry import explainer_ids, get_explainer
from .functional_tests import TESTS, DataPaths, test_ids
from .harness import (
    DEFAULT_OUTPUT_DIR,
    OUTPUT_DIR_ENV,
    RunManifest,
    any_errored,
    emit_report,
    load_archive,
    run_suite,
    write_archive,
)

USAGE_ERROR = 2


def _default_out() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR)


def _split_ids(raw: str | None) -> tuple[str, ...]:
    if not raw:
        return ()
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="explainerbench")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute the benchmark suite")
    run.add_argument("--tests", help="comma-separated test ids (default: all)")
    run.add_argument("--explainers", help="comma-separated explainer ids (default: all)")
    run.add_argument("--seed", type=int, help="fixed master seed (default: entropy)")
    run.add_argument("--jobs", type=int, default=0, help="worker count (default: all cores)")
    run.add_argument("--compas", help="path to the recidivism CSV")
    run.add_argument("--mnist-images", help="path to an IDX image file")
    run.add_argument("--mnist-labels", help="path to an IDX label file")
    run.add_argument("--out", default=_default_out(), help="output directory")

    report = sub.add_parser("report", help="re-emit an archive in one format")
    report.add_argument("--format", choices=("json", "csv", "md"), required=True)
    report.add_argument("--in", dest="in_dir", default=_default_out(), help="archive directory")

    pareto = sub.add_parser("pareto", help="print the Pareto-front explainer ids")
    pareto.add_argument("--in", dest="in_dir", default=_default_out(), help="archive directory")

    lst = sub.add_parser("list", help="list registered tests or explainers")
    lst.add_argument("kind", choices=("tests", "explainers"))
    return parser


def _cmd_run(args) -> int:
    manifest = RunManifest(
        seed_policy="fixed" if args.seed is not None else "entropy",
        master_seed=args.seed,
        selected_tests=_split_ids(args.tests),
        selected_explainers=_split_ids(args.explainers),
        parallelism=args.jobs,
        data_paths=DataPaths(
            compas=args.compas,
            mnist_images=args.mnist_images,
            mnist_labels=args.mnist_labels,
        ),
    )
    try:
        archive = run_suite(manifest)
    except UnknownIdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    path = write_archive(archive, args.out)
    errored = [e for e in archive["experiments"] if e["status"] == "errored"]
    completed = sum(1 for e in archive["experiments"] if e["status"] == "completed")
    skipped = sum(1 for e in archive["experiments"] if e["status"] == "skipped_ineligible")
    print(f"wrote {path}")
    print(f"completed={completed} skipped={skipped} errored={len(errored)}")
    for e in errored:
        print(f"  errored: {e['test']} x {e['explainer']}: {e.get('message', '')}")
    return 1 if errored else 0


def _cmd_report(args) -> int:
    archive = load_archive(args.in_dir)
    sys.stdout.write(emit_report(archive, args.format))
    return 0


def _cmd_pareto(args) -> int:
    archive = load_archive(args.in_dir)
    for explainer_id in archive["pareto"]:
        print(explainer_id)
    return 0


def _cmd_list(args) -> int:
    if args.kind == "tests":
        print(f"{'id':44s} {'category':10s} {'model':14s} outputs")
        for tid in sorted(test_ids()):
            t = TESTS[tid]
            print(f"{t.id:44s} {t.category:10s} {t.model_kind:14s} {','.join(t.variants)}")
    else:
        print(f"{'id':24s} {'portability':11s} {'perturbation':12s} outputs")
        for eid in sorted(explainer_ids()):
            d = get_explainer(eid).descriptor
            print(
                f"{d.id:24s} {d.portability:<11d} {str(d.perturbation_based):12s} "
                f"{','.join(sorted(d.outputs))}"
            )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "pareto":
            return _cmd_pareto(args)
        return _cmd_list(args)
    except ArchiveSchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BenchmarkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
