"""Command line front end.

    diracjc run <scenario> [-o out.csv]
    diracjc energies <scenario> --n 0,1,2,3 [-o out.csv]
    diracjc validate <scenario>

CSV goes to ``-o`` (with a ``.meta`` key-value sidecar next to it) or to
stdout, in which case the metadata is written to stderr. Errors are printed
to stderr as ``error: category=<name> <message>``. Set ``DIRACJC_LOG`` to a
logging level name (DEBUG, INFO, ...) for diagnostics.
"""

from __future__ import annotations

import argparse
import io
import logging
import os
import sys
from pathlib import Path

from .errors import ConvergenceError, DiracJCError
from .scenario import Scenario, format_kv
from .simulate import energy_table, run, validate

EXIT_CODES = {
    "config": 2,
    "domain": 2,
    "convergence": 3,
    "truncation": 4,
    "validation": 5,
    "no-analytic": 6,
    "error": 1,
}

log = logging.getLogger("diracjc")


def _fmt(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def write_csv(stream, header, rows) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def series_csv(series) -> str:
    cols = series.columns()
    buf = io.StringIO(newline="")
    write_csv(buf, list(cols), zip(*(cols[k].tolist() for k in cols)))
    return buf.getvalue()


def _emit(text: str, meta: dict, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stderr.write(format_kv(meta))
        return
    path = Path(out)
    path.write_bytes(text.encode("ascii"))
    Path(str(path) + ".meta").write_bytes(format_kv(meta).encode("utf-8"))


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("need at least one n, all >= 0")
    return values


def cmd_run(args) -> int:
    scenario = Scenario.load(args.scenario)
    series = run(scenario)
    meta = {"scenario": str(args.scenario), **series.meta}
    _emit(series_csv(series), meta, args.output)
    return 0


def cmd_energies(args) -> int:
    scenario = Scenario.load(args.scenario)
    rows, meta = energy_table(scenario, args.n)
    buf = io.StringIO(newline="")
    write_csv(buf, ["t", "n", "e_plus", "e_minus"], rows)
    _emit(buf.getvalue(), {"scenario": str(args.scenario), **meta}, args.output)
    return 0


def cmd_validate(args) -> int:
    scenario = Scenario.load(args.scenario)
    report = validate(scenario)
    sys.stdout.write(format_kv(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracjc",
        description="Time-dependent Dirac oscillator via its Jaynes-Cummings mapping.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a scenario and write observables as CSV")
    p.add_argument("scenario", help="scenario file (key = value)")
    p.add_argument("-o", "--output", help="CSV path; metadata goes to <path>.meta")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("energies", help="instantaneous energy eigenvalues on the time grid")
    p.add_argument("scenario")
    p.add_argument("--n", type=_parse_n_list, default=[0, 1, 2, 3],
                   help="comma-separated quantum numbers (default 0,1,2,3)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_energies)

    p = sub.add_parser("validate", help="compare analytic and numeric backends")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_validate)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("DIRACJC_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except DiracJCError as exc:
        category = exc.category
        sys.stderr.write(f"error: category={category} {exc}\n")
        report = getattr(exc, "report", None)
        if report:
            sys.stdout.write(format_kv(report))
        code = EXIT_CODES.get(category, 1)
        if isinstance(exc, ConvergenceError):
            code = EXIT_CODES["convergence"]
        return code


if __name__ == "__main__":
    sys.exit(main())
