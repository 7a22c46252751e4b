"""Command line front door.

    assistlab run <config.yaml> --out <dir> [--jobs N] [--paper-literal-averages]
    assistlab replay <log>
    assistlab report <dir>
    assistlab serve [--bind HOST] [--port N] [--sessions-dir DIR] [--ui-dir DIR]

Exit codes: 0 ok, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .report import format_percent, format_time_metric
from .runner import replay_summaries, report_from_logs, run_experiment, verify_log
from .service import DEFAULT_BIND, DEFAULT_PORT, serve
from .store import read_log

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assistlab",
        description="Input-assistance lab: batch runs, log replay, reports, live service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured experiment sweep")
    run.add_argument("config", help="experiment config (YAML)")
    run.add_argument("--out", required=True, help="output directory (must be empty)")
    run.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    run.add_argument(
        "--paper-literal-averages",
        action="store_true",
        help="average times over all sub-tasks instead of successful ones",
    )
    run.set_defaults(func=_cmd_run)

    replay = sub.add_parser("replay", help="recompute metrics from a stored session log")
    replay.add_argument("log", help="path to a .session.jsonl file")
    replay.set_defaults(func=_cmd_replay)

    report = sub.add_parser("report", help="rebuild the report from a directory of logs")
    report.add_argument("directory", help="directory searched recursively for logs")
    report.set_defaults(func=_cmd_report)

    srv = sub.add_parser("serve", help="serve the live trial protocol over WebSocket")
    srv.add_argument("--bind", default=DEFAULT_BIND, help="bind address")
    srv.add_argument("--port", type=int, default=DEFAULT_PORT, help="TCP port")
    srv.add_argument("--sessions-dir", default="sessions", help="where live logs are written")
    srv.add_argument("--ui-dir", default=None, help="static UI bundle to serve at /")
    srv.set_defaults(func=_cmd_serve)
    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    result = run_experiment(
        config,
        args.out,
        jobs=args.jobs,
        paper_literal=True if args.paper_literal_averages else None,
    )
    print(result.report.to_text())
    print()
    print(f"logs:   {result.out_dir / 'logs'}")
    print(f"report: {result.out_dir / 'report.txt'} (and report.csv)")
    return EXIT_OK


def _cmd_replay(args) -> int:
    log = read_log(args.log)
    problems = verify_log(log)
    summary = replay_summaries(log)
    print(f"label:     {log.header.run_label}")
    print(f"profile:   {log.header.profile}")
    print(f"mode:      {summary.mode}")
    print(f"sub-tasks: {summary.n} ({summary.successes} succeeded)")
    print(f"success:   {format_percent(summary.success_pct)}")
    print(f"time:      {format_time_metric(summary.mode, summary.time_metric)}")
    if problems:
        for problem in problems:
            print(f"mismatch: {problem}", file=sys.stderr)
        return EXIT_RUNTIME
    print("verified:  trailer records match the event stream")
    return EXIT_OK


def _cmd_report(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise RuntimeError(f"{directory} is not a directory")
    table = report_from_logs(directory)
    if not table.rows:
        raise RuntimeError(f"no session logs found under {directory}")
    print(table.to_text())
    return EXIT_OK


def _cmd_serve(args) -> int:
    serve(bind=args.bind, port=args.port, sessions_dir=args.sessions_dir, ui_dir=args.ui_dir)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        missing = exc.filename or exc
        if args.command == "run":
            print(f"config error: {missing} not found", file=sys.stderr)
            return EXIT_CONFIG
        print(f"error: {missing} not found", file=sys.stderr)
        return EXIT_RUNTIME
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
