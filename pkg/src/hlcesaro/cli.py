"""Command line: ``hlcesaro verify | sweep | oracle-suite``.

Exit codes: 0 success, 1 a check failed (imaginary parts did not cancel,
an oracle identity missed its tolerance, or an evaluation failed),
2 bad arguments, 3 unreadable or invalid data.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from . import report
from .errors import ConfigError, DataError, DomainError, HLError, InvalidArgument, OutOfRange
from .formula import TruncationConfig, verify
from .oracles import FAMILIES, run_oracle_suite
from .sieve import CesaroQuery, Normalization, sieve_von_mangoldt
from .zeros import ENV_VAR, ZeroList, load_zeros

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3


@dataclass
class RunConfig:
    suite: str
    n: list = field(default_factory=list)
    k: float = 2.0
    zeros_file: str | None = None
    zero_count: int = 10_000
    ell_max: int | None = None
    double_zero_count: int | None = None
    term_floor: float = 1e-16
    normalization: str = "divided"
    output_format: str = "table"
    plot: str | None = None
    digits: int | None = None
    exploratory: bool = False
    only: list | None = None

    def truncation(self) -> TruncationConfig:
        return TruncationConfig(zero_count=self.zero_count, ell_max=self.ell_max,
                                double_zero_count=self.double_zero_count,
                                term_floor=self.term_floor, exploratory=self.exploratory)

    def echo(self) -> dict:
        return asdict(self)


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text}")
    return v


def _positive_int(text):
    v = _nonneg_int(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hlcesaro", description="Check the explicit formula for Cesaro-weighted "
                "sums of prime-plus-square representations against a direct sieve.")
    sub = p.add_subparsers(dest="suite", required=True, parser_class=_Parser)

    def common(sp, many):
        if many:
            sp.add_argument("--n", type=_positive_int, nargs="+", required=True, help="values of N")
        else:
            sp.add_argument("--n", type=_positive_int, required=True, help="N")
        sp.add_argument("--k", type=float, default=2.0, help="Cesaro order (default 2)")
        sp.add_argument("--zeros", dest="zeros_file", help=f"zeros file (default: ${ENV_VAR})")
        sp.add_argument("--zero-count", type=_nonneg_int, default=10_000)
        sp.add_argument("--ell-max", type=_nonneg_int, default=None, help="default: automatic")
        sp.add_argument("--double-zero-count", type=_nonneg_int, default=None,
                        help="zeros in the double Bessel sum (default min(zero count, 2000))")
        sp.add_argument("--term-floor", type=float, default=1e-16)
        sp.add_argument("--normalization", choices=[m.value for m in Normalization], default="divided")
        sp.add_argument("--format", dest="output_format", choices=["table", "json", "csv"], default="table")
        sp.add_argument("--digits", type=int, default=None,
                        help="evaluate the sieve sum with this many decimal digits")
        sp.add_argument("--exploratory", action="store_true", help="allow k <= 1")
        sp.add_argument("--no-timings", action="store_true", help="leave timings out of the output")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")

    common(sub.add_parser("verify", help="one N"), many=False)
    sw = sub.add_parser("sweep", help="several N, optional residual plot")
    common(sw, many=True)
    sw.add_argument("--plot", help="write an SVG plot of the residuals to this path")
    oc = sub.add_parser("oracle-suite", help="identity checks on the default grid")
    oc.add_argument("--zeros", dest="zeros_file", help=f"zeros file (default: ${ENV_VAR})")
    oc.add_argument("--only", action="append", choices=FAMILIES, help="run only this family (repeatable)")
    oc.add_argument("--format", dest="output_format", choices=["table", "json"], default="table")
    oc.add_argument("--output", "-o")
    return p


def _zeros(path: str | None, count: int | None, required: bool) -> ZeroList:
    if not required:
        return ZeroList.empty()
    path = path or os.environ.get(ENV_VAR)
    if not path:
        raise DataError(f"no zeros file given; use --zeros or set {ENV_VAR}")
    return load_zeros(path, max_count=count)


def _emit(text: str, dest: str | None):
    if dest:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(reports, cfg: RunConfig, timings: bool) -> str:
    if cfg.output_format == "json":
        return report.to_json(reports, cfg.echo(), timings)
    if cfg.output_format == "csv":
        return report.to_csv(reports)
    return report.to_table(reports, timings)


def _run_formula(args, cfg: RunConfig) -> int:
    ns = cfg.n
    queries = [CesaroQuery(n, cfg.k, Normalization(cfg.normalization)) for n in ns]
    trunc = cfg.truncation()
    zeros = _zeros(cfg.zeros_file, cfg.zero_count, cfg.zero_count > 0)
    table = sieve_von_mangoldt(max(max(ns), 2))
    reports = [verify(q, zeros, trunc, table, cfg.digits) for q in queries]
    _emit(_render(reports, cfg, not args.no_timings), args.output)
    if cfg.plot:
        with open(cfg.plot, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.residual_plot_svg([r.query.n for r in reports], [r.residual for r in reports]))
    failed = [r for r in reports if not r.ok]
    for r in failed:
        print(f"error: N={r.query.n}: imaginary parts of conjugate pairs did not cancel", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def _run_oracles(args, cfg: RunConfig) -> int:
    families = cfg.only or list(FAMILIES)
    zeros = None
    if "linnik" in families:
        zeros = _zeros(cfg.zeros_file, None, True)
    results = run_oracle_suite(zeros, families)
    if cfg.output_format == "json":
        doc = {"schema_version": 1, "config": cfg.echo(),
               "checks": [{"family": r.family, "name": r.name, "value": r.value,
                           "tolerance": r.tolerance, "passed": r.passed} for r in results]}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = report.oracle_table(results)
    _emit(text, args.output)
    failed = [r for r in results if not r.passed]
    if failed:
        names = "; ".join(f"{r.family}: {r.name}" for r in failed)
        print(f"error: {len(failed)} check(s) failed: {names}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(suite=args.suite, zeros_file=args.zeros_file, output_format=args.output_format)
    if args.suite == "oracle-suite":
        cfg.only = args.only
    else:
        cfg.n = args.n if isinstance(args.n, list) else [args.n]
        cfg.k = args.k
        cfg.zero_count = args.zero_count
        cfg.ell_max = args.ell_max
        cfg.double_zero_count = args.double_zero_count
        cfg.term_floor = args.term_floor
        cfg.normalization = args.normalization
        cfg.digits = args.digits
        cfg.exploratory = args.exploratory
        cfg.plot = getattr(args, "plot", None)
    try:
        if args.suite == "oracle-suite":
            return _run_oracles(args, cfg)
        return _run_formula(args, cfg)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigError, InvalidArgument, DomainError, OutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HLError as exc:
        print(f"error: evaluation failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
