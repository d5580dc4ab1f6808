"""Command-line front end.

    dea-frontier long-run  DATA --inputs capital,labour --outputs output [--model additive]
    dea-frontier short-run DATA --inputs ... --outputs ... --capital capital
    dea-frontier compare   DATA --inputs ... --outputs ... --capital capital --format json
    dea-frontier scale     DATA --inputs ... --outputs ...

Exit status: 0 on success, 2 on usage errors, 1 on data or solver errors.
Every failure prints a single diagnostic line on stderr and no report.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dea import evaluate_all, scale_decomposition
from .ingest import ColumnRoleConfig, MissingColumnError, parse_csv, write_report
from .model import Form, ModelSpec, DeaError, RTS
from .shortrun import compare_short_long, short_run_frontier


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _names(text: str | None) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dea-frontier",
                     description="Long-run and short-run DEA frontiers from a CSV dataset.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (("long-run", "long-run efficiency (all inputs variable)"),
                            ("short-run", "short-run efficiency with capital fixed"),
                            ("compare", "long-run vs short-run slack-based indices"),
                            ("scale", "scale efficiency, CRS score over VRS score")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("data", type=Path, help="CSV file with a header row")
        p.add_argument("--inputs", required=True, help="comma-separated input columns")
        p.add_argument("--outputs", required=True, help="comma-separated output columns")
        p.add_argument("--capital", default="", help="comma-separated capital (fixed) inputs")
        p.add_argument("--id", default="id", help="unit identifier column (default: id)")
        if name == "long-run":
            p.add_argument("--model", choices=[f.value for f in Form], default="additive")
        if name != "scale":
            p.add_argument("--rts", choices=["crs", "vrs"], default="crs")
        p.add_argument("--format", choices=["json", "csv", "table"], default="table")
        p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    return parser


def _check(args) -> None:
    capital = _names(args.capital)
    if args.command in ("short-run", "compare") and not capital:
        raise UsageError(f"{args.command} requires a capital column")
    if args.command == "long-run" and args.model == "radial-nd" and not capital:
        raise UsageError("radial-nd requires a capital column")
    if getattr(args, "rts", "crs") == "vrs":
        if args.command in ("short-run", "compare"):
            raise UsageError(f"{args.command} is only defined under constant returns to scale")
        if args.model == "radial-nd":
            raise UsageError("radial-nd is only defined under constant returns to scale")


def _render(args) -> str:
    try:
        config = ColumnRoleConfig(_names(args.inputs), _names(args.outputs),
                                  _names(args.capital), args.id)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        text = args.data.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise UsageError(f"cannot read {args.data}: {exc.strerror or exc}") from None
    try:
        dataset = parse_csv(text, config)
    except MissingColumnError as exc:
        raise UsageError(str(exc)) from None

    rts = getattr(args, "rts", "crs")
    if args.command == "long-run":
        spec = ModelSpec(Form(args.model), RTS(rts), dataset.capital_inputs
                         if args.model == "radial-nd" else ())
        try:
            spec.check(dataset.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        report = evaluate_all(dataset, spec)
        model = args.model
    elif args.command == "short-run":
        report, model = short_run_frontier(dataset), "additive-short-run"
    elif args.command == "compare":
        report, model = compare_short_long(dataset), "additive-compare"
    else:
        report = [scale_decomposition(dataset, j) for j in range(dataset.n)]
        model, rts = "radial-scale", "crs/vrs"
    return write_report(report, args.format, dataset, model=model, rts=rts)


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _check(args)
        text = _render(args)
    except UsageError as exc:
        print(f"dea-frontier: error: {exc}", file=sys.stderr)
        return 2
    except (DeaError, ValueError) as exc:
        print(f"dea-frontier: error: {' '.join(str(exc).split())}", file=sys.stderr)
        return 1
    if args.out is not None:
        try:
            args.out.write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"dea-frontier: error: cannot write {args.out}: {exc.strerror or exc}",
                  file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
