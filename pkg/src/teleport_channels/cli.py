"""Command-line front door: ``teleport-channels run|list``.

Exit status: 0 all checks pass, 1 a check failed its tolerance,
2 usage or configuration error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Sequence

from .experiments import FIELDS, REGISTRY, ConfigError, ReportRow, run_experiment

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

log = logging.getLogger("teleport_channels")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_NONE, escapechar="\\")
    writer.writerow(FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, f)) for f in FIELDS])
    return buf.getvalue()


def _json_value(value):
    if isinstance(value, float) and value != value:
        return None
    return value


def render_json(rows: Sequence[ReportRow]) -> str:
    payload = [{f: _json_value(getattr(row, f)) for f in FIELDS} for row in rows]
    return json.dumps({"fields": list(FIELDS), "rows": payload}, indent=1) + "\n"


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        config = json.loads(text)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    return config


def build_config(args: argparse.Namespace) -> tuple[dict, str, str | None]:
    config = load_config(args.config)
    output = config.pop("output", {}) or {}
    if not isinstance(output, dict):
        raise ConfigError("output must be an object with format and path")
    if args.experiment:
        config["experiment"] = args.experiment
    if args.seed is not None:
        config["seed"] = args.seed
    fmt = args.format or output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output format must be csv or json, got {fmt!r}")
    path = args.out or output.get("path")
    return config, fmt, path


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config, fmt, path = build_config(args)
        rows = run_experiment(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_csv(rows) if fmt == "csv" else render_json(rows)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write report {path!r}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    failed = [r for r in rows if r.role == "check" and not r.passed]
    checks = sum(r.role == "check" for r in rows)
    print(f"{config.get('experiment')}: {checks - len(failed)}/{checks} checks passed, "
          f"{len(rows) - checks} audit rows", file=sys.stderr)
    return EXIT_VERIFICATION if failed else EXIT_OK


def cmd_list(args: argparse.Namespace) -> int:
    width = max(len(n) for n in REGISTRY)
    for name, exp in REGISTRY.items():
        print(f"{name:<{width}}  {exp.description}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleport-channels",
        description="Simulate two-pair entanglement teleportation and check its closed forms.")
    sub = parser.add_subparsers(dest="command")
    run = sub.add_parser("run", help="run one experiment and write its report")
    run.add_argument("--config", help="JSON config file, or - for standard input")
    run.add_argument("--experiment", help="experiment name (overrides the config)")
    run.add_argument("--out", help="report path (default: standard output)")
    run.add_argument("--format", choices=("csv", "json"))
    run.add_argument("--seed", type=int, help="seed for randomized parameters")
    run.set_defaults(func=cmd_run)
    lst = sub.add_parser("list", help="list registered experiments")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except Exception:  # noqa: BLE001 - internal errors get their own exit status
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
