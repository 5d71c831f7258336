"""Operator command line.

Subcommands: ingest a raw corpus, serve the HTTP API, create or list
snapshots, run pending aggregations (or a snapshot funnel), print
reports, and export the dataset. All state lives in the store named by
the config file (or the CAUSEWAY_STORAGE_PATH environment variable).
"""

from __future__ import annotations

import argparse
import os
import sys

from .aggregation import AggregationError
from .config import ConfigError, ServiceConfig, load_config
from .platform import Platform, PlatformError
from .workflow import WorkflowError

DEFAULT_CONFIG = "causeway.yaml"


def _load(args: argparse.Namespace) -> ServiceConfig:
    path = args.config
    if path is None:
        path = DEFAULT_CONFIG if os.path.exists(DEFAULT_CONFIG) else None
    if path is None:
        return ServiceConfig()
    return load_config(path)


def cmd_ingest(args: argparse.Namespace) -> int:
    from .ingestion import FilterPolicy, topic_summary

    config = _load(args)
    platform = Platform(config)
    try:
        policy = None
        topics: frozenset[str] | None = None
        if args.topics:
            with open(args.topics, encoding="utf-8") as handle:
                topics = frozenset(line.strip() for line in handle if line.strip())
        if topics or args.min_quality is not None or args.min_stance is not None:
            base = config.ingestion
            policy = FilterPolicy(
                min_quality=base.min_quality if args.min_quality is None else args.min_quality,
                min_stance=base.min_stance if args.min_stance is None else args.min_stance,
                topics=topics if topics is not None else frozenset(base.topics),
                stance_required=base.stance_required,
            )
        column_map = dict(pair.split("=", 1) for pair in args.column_map or [])
        result = platform.ingest_corpus(
            args.input, column_map=column_map or None, policy=policy
        )
        print(f"admitted {len(result.admitted)}")
        print(f"rejected {len(result.rejected)}")
        for reason, count in sorted(result.rejection_counts().items()):
            print(f"  {reason} {count}")
        for topic, count in topic_summary(result.admitted):
            print(f"topic {topic!r} {count}")
        return 0
    finally:
        platform.close()


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _load(args)
    platform = Platform(config)
    app = create_app(platform)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_snapshot(args: argparse.Namespace) -> int:
    config = _load(args)
    platform = Platform(config)
    try:
        if args.list:
            for snap in platform.list_snapshots():
                print(f"{snap['id']} {snap['created_at']}")
            return 0
        print(platform.create_snapshot())
        return 0
    finally:
        platform.close()


def cmd_aggregate(args: argparse.Namespace) -> int:
    config = _load(args)
    platform = Platform(config)
    try:
        if args.snapshot:
            report = platform.run_snapshot_funnel(args.snapshot)
            for label, value in report.to_rows():
                print(f"{value:6d}  {label}")
            return 0
        kinds = ["phase1", "validity", "score"] if args.kind == "all" else [args.kind]
        for kind in kinds:
            outcome = platform.aggregate_pending(kind)
            print(f"{kind}: aggregated {len(outcome['aggregated'])},"
                  f" left open {len(outcome['left_open'])}")
            if kind == "phase1":
                opened = platform.open_validity_tasks_for_keeps()
                if opened["opened"]:
                    print(f"phase2: opened {len(opened['opened'])} validity tasks")
        return 0
    finally:
        platform.close()


def cmd_report(args: argparse.Namespace) -> int:
    config = _load(args)
    platform = Platform(config)
    try:
        if args.stats:
            for label, value in platform.funnel_rows(args.snapshot):
                print(f"{value:6d}  {label}")
            stats = platform.stats_report(args.snapshot)
            for column in ("collected", "kept"):
                print(f"[{column}]")
                for key, value in stats[column].items():
                    if isinstance(value, float):
                        print(f"  {key} {value:.4f}")
                    else:
                        print(f"  {key} {value}")
        if args.coverage:
            coverage = platform.coverage_report(args.snapshot)
            for column in ("collected", "kept"):
                print(f"[{column}]")
                print("k\tpairs")
                for k in sorted(coverage[column]):
                    print(f"{k}\t{coverage[column][k]}")
        if args.agreement:
            agreement = platform.agreement_report(args.snapshot)
            for name in ("validity", "scores"):
                row = agreement[name]
                alpha = "undefined" if row["alpha"] is None else f"{row['alpha']:.4f}"
                print(f"{name}: alpha {alpha}, items {row['n_items']},"
                      f" raters {row['n_raters']}, pairable {row['n_pairable']}")
        if not (args.stats or args.coverage or args.agreement):
            print("nothing to report: pass --stats, --coverage, or --agreement", file=sys.stderr)
            return 2
        return 0
    finally:
        platform.close()


def cmd_export(args: argparse.Namespace) -> int:
    config = _load(args)
    platform = Platform(config)
    try:
        text = platform.export_dataset(args.snapshot, bucket=args.bucket)
        if args.output == "-":
            sys.stdout.write(text)
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
            print(f"wrote {args.output}")
        return 0
    finally:
        platform.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causeway",
        description="Collect, filter, and analyze implicit reasoning annotations.",
    )
    parser.add_argument("--config", help=f"YAML config path (default: ./{DEFAULT_CONFIG} if present)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="filter a raw corpus CSV and persist admitted arguments")
    p_ingest.add_argument("--input", required=True, help="path to the corpus CSV")
    p_ingest.add_argument("--min-quality", type=float, help="override config quality threshold")
    p_ingest.add_argument("--min-stance", type=float, help="override config stance threshold")
    p_ingest.add_argument("--topics", help="file with one allowed topic per line")
    p_ingest.add_argument(
        "--column-map", nargs="*", metavar="SRC=DST",
        help="rename corpus columns to the expected schema",
    )
    p_ingest.set_defaults(func=cmd_ingest)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8400)
    p_serve.set_defaults(func=cmd_serve)

    p_snapshot = sub.add_parser("snapshot", help="freeze current state for analytics")
    p_snapshot.add_argument("--list", action="store_true", help="list existing snapshots")
    p_snapshot.set_defaults(func=cmd_snapshot)

    p_aggregate = sub.add_parser(
        "aggregate", help="aggregate pending tasks, or run a snapshot funnel"
    )
    p_aggregate.add_argument(
        "--kind", choices=["phase1", "validity", "score", "all"], default="all"
    )
    p_aggregate.add_argument("--snapshot", help="run the filtering funnel on this snapshot")
    p_aggregate.set_defaults(func=cmd_aggregate)

    p_report = sub.add_parser("report", help="print snapshot reports")
    p_report.add_argument("--snapshot", required=True)
    p_report.add_argument("--stats", action="store_true")
    p_report.add_argument("--coverage", action="store_true")
    p_report.add_argument("--agreement", action="store_true")
    p_report.set_defaults(func=cmd_report)

    p_export = sub.add_parser("export", help="write the dataset CSV for a snapshot")
    p_export.add_argument("--snapshot", required=True)
    p_export.add_argument("--bucket", choices=["kept", "all"], default="kept")
    p_export.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p_export.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (WorkflowError, PlatformError, AggregationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
