"""Command-line entry point: ``betafrac verify | eval | corpus``.

Exit status: 0 on a clean run, 2 when any record is violated or errored,
1 on usage, configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from .calculus import BetaParam, Interval, beta_derivative, beta_integral
from .harness.corpus import TAG_ORDERS, TagMismatchError, corpus_by_name, default_corpus, tag_of
from .harness.report import FORMATS, emit_report, render_report
from .harness.runner import CHECKS, ConfigError, RunConfig, run_suite
from .taylor import integral_remainder, taylor_polynomial

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

log = logging.getLogger("betafrac")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _interval(text: str) -> tuple[float, float]:
    try:
        iv = Interval.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad interval {text!r}: {exc}") from None
    return (iv.a, iv.b)


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="betafrac", description="Numerical beta-fractional calculus and inequality checks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-cell failures")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run the check grid and write a report")
    verify.add_argument("--config", help="JSON file with RunConfig fields")
    verify.add_argument("--beta", type=_floats, action="extend", help="beta values, comma separated or repeated")
    verify.add_argument("--interval", type=_interval, action="append", help="interval a,b (repeatable)")
    verify.add_argument("--n", type=_ints, action="extend", dest="degrees", help="Taylor degrees")
    verify.add_argument("--tol", type=float)
    verify.add_argument("--checks", type=_names, help=f"subset of: {', '.join(CHECKS)}")
    verify.add_argument("--format", choices=FORMATS, default="json")
    verify.add_argument("--out", help="output path (default: standard output)")
    verify.add_argument("--parallel", type=int)

    ev = sub.add_parser("eval", help="evaluate one quantity for a corpus function")
    ev.add_argument("--function", required=True)
    ev.add_argument("--beta", type=float, required=True)
    ev.add_argument("--op", choices=("derivative", "integral", "taylor"), required=True)
    ev.add_argument("--x", type=float, help="evaluation point (derivative)")
    ev.add_argument("--k", type=int, default=1, help="number of beta-derivatives")
    ev.add_argument("--interval", type=_interval, help="a,b (integral)")
    ev.add_argument("--s", type=float, help="expansion point (taylor)")
    ev.add_argument("--t", type=float, help="evaluation point (taylor)")
    ev.add_argument("--n", type=int, default=1, help="Taylor degree")
    ev.add_argument("--tol", type=float, default=1e-10)

    cor = sub.add_parser("corpus", help="list corpus entries and their tags")
    cor.add_argument("--beta", type=float)
    cor.add_argument("--interval", type=_interval)
    return parser


def _config(args) -> RunConfig:
    base = RunConfig.from_json_file(args.config) if args.config else RunConfig()
    overrides = {
        "betas": args.beta,
        "intervals": args.interval,
        "degrees": args.degrees,
        "tol": args.tol,
        "checks": args.checks,
        "output_path": args.out,
        "parallel": args.parallel,
    }
    if args.checks is not None and not args.checks:
        raise ConfigError("checks must be non-empty")
    data = {
        "betas": base.betas,
        "intervals": base.intervals,
        "degrees": base.degrees,
        "tol": base.tol,
        "checks": base.checks,
        "output_path": base.output_path,
        "parallel": base.parallel,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_mapping(data)


def _verify(args) -> int:
    cfg = _config(args)
    report = run_suite(cfg)
    if cfg.output_path:
        emit_report(report, args.format, cfg.output_path)
    else:
        sys.stdout.write(render_report(report, args.format))
    s = report.summary
    print(
        f"{len(report.records)} records: {s['holds']} holds, {s['violated']} violated, "
        f"{s['hypothesis_not_met']} hypothesis_not_met, {s['error']} error",
        file=sys.stderr,
    )
    return EXIT_OK if report.exit_code == 0 else EXIT_VIOLATION


def _eval(args) -> int:
    corpus = corpus_by_name()
    if args.function not in corpus:
        raise ConfigError(f"unknown function {args.function!r}; known: {', '.join(corpus)}")
    p = BetaParam(args.beta)
    f = corpus[args.function].model(p.beta)
    out: dict = {"function": args.function, "beta": p.beta, "op": args.op}
    if args.op == "derivative":
        if args.x is None:
            raise ConfigError("--x is required for --op derivative")
        out.update(x=args.x, k=args.k, value=beta_derivative(p, f, args.k, args.x))
    elif args.op == "integral":
        if args.interval is None:
            raise ConfigError("--interval is required for --op integral")
        res = beta_integral(p, f, args.interval, args.tol)
        out.update(a=args.interval[0], b=args.interval[1], value=res.value, error_estimate=res.error_estimate)
    else:
        if args.s is None or args.t is None:
            raise ConfigError("--s and --t are required for --op taylor")
        poly = taylor_polynomial(p, f, args.s, args.n, args.t)
        rem = integral_remainder(p, f, args.s, args.n, args.t, args.tol)
        out.update(s=args.s, t=args.t, n=args.n, polynomial=poly, remainder=rem, value=float(f(args.t)))
    print(json.dumps(out))
    return EXIT_OK


def _corpus(args) -> int:
    for entry in default_corpus():
        lo, hi = entry.domain
        print(f"{entry.name:14s} {entry.description:28s} domain [{lo:g}, {hi:g}]  tagged cells: {len(entry.known_properties)}")
        if args.beta is not None and args.interval is not None:
            for k in range(TAG_ORDERS):
                tag = tag_of(entry, args.beta, *args.interval, k)
                if tag is None:
                    print("    (cell not tagged)")
                    break
                flags = "".join([" constant" if tag.constant else "", " zero" if tag.zero else ""])
                print(f"    D^{k}beta: {tag.direction}, {tag.sign}{flags}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    handlers = {"verify": _verify, "eval": _eval, "corpus": _corpus}
    try:
        return handlers[args.command](args)
    except (ConfigError, TagMismatchError, ValueError) as exc:
        print(f"betafrac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"betafrac: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
