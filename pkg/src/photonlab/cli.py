"""Command-line surface.

Subcommands: ``toolbox list``, ``retrieve``, ``lint``, ``simulate``,
``pipeline run`` and ``intent``.  Exit codes: 0 success, 1 lint rejection,
2 usage error.  Diagnostics go to stderr; machine-readable output goes to
stdout or into report bundles.  Seeds default to 42 and are recorded in the
bundle, so re-running a command reproduces its outputs byte for byte.

The retrieval index covers learned composites from the toolbox directory
(``TOOLBOX_DIR`` or ``--toolbox-dir``) plus the thirteen bundled reference
designs, so queries are useful before any composite has been approved.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .experiments import EXPERIMENT_KEYS, bundled_setup, run_experiment
from .model import SetupParseError, parse_setup
from .pipeline import classify_intent_fallback, lint_design, run_pipeline
from .report import BundleError, write_bundle
from .retrieval import EmbeddingIndex, decide_match, index_toolbox
from .toolbox import composite_text, load_toolbox

__all__ = ["cli_main", "main"]

DEFAULT_SEED = 42


def _toolbox_dir(args) -> Path | None:
    if args.toolbox_dir:
        return Path(args.toolbox_dir)
    env = os.environ.get("TOOLBOX_DIR")
    return Path(env) if env else None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonlab",
        description="Design, validate and simulate table-top quantum optics experiments.",
    )
    parser.add_argument("--toolbox-dir", help="directory holding the toolbox tier files")
    sub = parser.add_subparsers(dest="command", required=True)

    p_toolbox = sub.add_parser("toolbox", help="inspect the component library")
    toolbox_sub = p_toolbox.add_subparsers(dest="toolbox_command", required=True)
    p_list = toolbox_sub.add_parser("list", help="list entries of one tier")
    p_list.add_argument(
        "--tier", required=True, choices=("primitives", "composites", "custom")
    )

    p_retrieve = sub.add_parser("retrieve", help="semantic search over stored designs")
    p_retrieve.add_argument("query")
    p_retrieve.add_argument("--top", type=int, default=5)
    p_retrieve.add_argument(
        "--no-bundled", action="store_true", help="index approved composites only"
    )

    p_lint = sub.add_parser("lint", help="check a setup file against physical ranges")
    p_lint.add_argument("setup_file")

    p_sim = sub.add_parser("simulate", help="run one experiment simulator")
    p_sim.add_argument("--experiment", required=True, choices=EXPERIMENT_KEYS)
    p_sim.add_argument("--params", help="JSON file of simulator parameter overrides")
    p_sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sim.add_argument("--out", required=True, help="bundle output directory")

    p_pipe = sub.add_parser("pipeline", help="full validation pipeline")
    pipe_sub = p_pipe.add_subparsers(dest="pipeline_command", required=True)
    p_run = pipe_sub.add_parser("run", help="lint, simulate, score and refine a setup")
    p_run.add_argument("setup_file")
    p_run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_run.add_argument("--out", required=True, help="bundle output directory")

    p_intent = sub.add_parser("intent", help="route a message to chat or design")
    p_intent.add_argument("text")
    return parser


def _cmd_toolbox_list(args) -> int:
    toolbox = load_toolbox(_toolbox_dir(args))
    if args.tier == "primitives":
        for entry in toolbox.primitives:
            print(f"{entry.name}\t{entry.category.value}")
    elif args.tier == "composites":
        for composite in sorted(toolbox.composites, key=lambda c: (c.name, c.version)):
            print(f"{composite.name}\tv{composite.version}\t{composite.approved_at}")
    else:
        for entry in sorted(toolbox.custom.values(), key=lambda c: c.name):
            print(f"{entry.name}\tused {entry.usage_count}\t{entry.last_used}")
    return 0


def _cmd_retrieve(args) -> int:
    toolbox = load_toolbox(_toolbox_dir(args))
    index: EmbeddingIndex = index_toolbox(toolbox)
    if not args.no_bundled:
        for key in EXPERIMENT_KEYS:
            setup = bundled_setup(key)
            index.add(key, 1, composite_text(key, setup))
    hits = index.query(args.query, k=args.top)
    decision = decide_match(hits)
    for hit in hits:
        print(f"{hit.name}\tv{hit.version}\t{hit.similarity:.4f}")
    print(f"decision\t{decision.outcome.value}")
    return 0


def _cmd_lint(args) -> int:
    setup = parse_setup(Path(args.setup_file).read_bytes())
    verdict = lint_design(setup)
    print(
        json.dumps(
            {
                "approved": verdict.approved,
                "confidence": verdict.confidence,
                "concerns": list(verdict.concerns),
            }
        )
    )
    if not verdict.approved:
        for concern in verdict.concerns:
            print(f"concern: {concern}", file=sys.stderr)
        return 1
    return 0


def _cmd_simulate(args) -> int:
    params = None
    if args.params:
        params = json.loads(Path(args.params).read_text(encoding="utf-8"))
    setup = bundled_setup(args.experiment)
    metrics = run_experiment(args.experiment, setup=setup, params=params, seed=args.seed)
    bundle = write_bundle(args.out, setup, metrics, seed=args.seed)
    print(bundle.directory)
    return 0


def _cmd_pipeline_run(args) -> int:
    setup = parse_setup(Path(args.setup_file).read_bytes())
    best, history = run_pipeline(setup, seed=args.seed)
    if best.metrics is None:
        for concern in best.verdict.concerns:
            print(f"concern: {concern}", file=sys.stderr)
        print(f"pipeline failed: {best.failure or best.status.value}", file=sys.stderr)
        return 1
    bundle = write_bundle(args.out, setup, best.metrics, history=history, seed=args.seed)
    print(bundle.directory)
    return 0


def _cmd_intent(args) -> int:
    print(classify_intent_fallback(args.text).value)
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help.
        return int(exc.code or 0)
    try:
        if args.command == "toolbox":
            return _cmd_toolbox_list(args)
        if args.command == "retrieve":
            return _cmd_retrieve(args)
        if args.command == "lint":
            return _cmd_lint(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "pipeline":
            return _cmd_pipeline_run(args)
        if args.command == "intent":
            return _cmd_intent(args)
    except (SetupParseError, BundleError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser.print_usage(sys.stderr)
    return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
