"""Command-line front end.

Exit codes: 0 success (whatever the verdict), 1 usage or precondition error,
2 internal inconsistency or I/O failure, 3 factorization budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from typing import Any, Sequence

from . import __version__
from .characterization import Strategy, classify
from .divisors import mean_of_divisors
from .errors import ArithnumError, BudgetExceeded, ConsistencyError, PreconditionError
from .factorization import DEFAULT_BUDGET, Factorization, factor
from .sieve import (
    MAX_LIMIT,
    density_csv,
    discrepancy_scan,
    enumerate_arithmetic,
    enumeration_csv,
    first_arithmetic,
    format_density,
)
from .verdict import VerdictDocument, render_certificate, summary_line

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_BUDGET = 0, 1, 2, 3

_INTEGER = re.compile(r"\s*\d+\s*")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def dump_json(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def parse_input(text: str, budget: int = DEFAULT_BUDGET) -> tuple[Factorization, str]:
    """Decimal integer or factored form; returns the factorization and a canonical label."""
    if _INTEGER.fullmatch(text):
        n = int(text)
        if n < 1:
            raise PreconditionError("input must be >= 1")
        return factor(n, budget), str(n)
    f = Factorization.parse(text)
    return f, str(f)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _positive_limit(args: argparse.Namespace) -> int:
    if args.limit is None or args.limit < 1:
        raise PreconditionError("--limit must be a positive integer")
    if args.limit > MAX_LIMIT:
        raise PreconditionError(f"--limit may not exceed {MAX_LIMIT}")
    return args.limit


def cmd_classify(args: argparse.Namespace) -> int:
    f, label = parse_input(args.input, args.budget)
    verdict = classify(f, Strategy(args.strategy))
    if args.format == "json":
        text = VerdictDocument.from_verdict(verdict, label).to_json()
    elif args.format == "csv":
        rows = ["q,v_q_tau,v_q_sigma,contributing"]
        for row in verdict.ledger.rows:
            pairs = " ".join(f"{c.base}:{c.index}:{c.valuation}" for c in row.contributions)
            rows.append(f"{row.prime},{row.tau_valuation},{row.sigma_valuation},{pairs}")
        text = "\n".join(rows) + "\n"
    elif args.explain:
        text = summary_line(verdict) + "\n" + render_certificate(verdict, label) + "\n"
    else:
        text = summary_line(verdict) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    limit = _positive_limit(args)
    result = enumerate_arithmetic(limit, keep_values=args.format != "text", workers=args.workers)
    if args.format == "csv":
        text = enumeration_csv(result, include_all=args.all)
    elif args.format == "json":
        ns = range(1, limit + 1) if args.all else (int(n) for n in result.members())
        text = dump_json({
            "limit": limit,
            "count": result.stats.arithmetic_count,
            "rows": [{"n": n, "sigma": int(result.sigma[n]), "tau": int(result.tau[n]),
                      "arithmetic": bool(result.bits[n])} for n in ns],
        })
    else:
        text = "".join(f"{n}\n" for n in result.members())
    _emit(text, args.out)
    summary = f"{result.stats.arithmetic_count} arithmetic numbers in [1, {limit}]\n"
    (sys.stdout if args.out else sys.stderr).write(summary)
    return EXIT_OK


def cmd_density(args: argparse.Namespace) -> int:
    limit = _positive_limit(args)
    if limit < 1000:
        raise PreconditionError("density reports need --limit >= 1000")
    stats = enumerate_arithmetic(limit, workers=args.workers).stats
    if args.format == "csv":
        text = density_csv(stats)
    elif args.format == "json":
        text = dump_json({
            "limit": limit,
            "arithmetic_count": stats.arithmetic_count,
            "non_arithmetic_count": stats.non_arithmetic_count,
            "rows": [{"decade": r.upper, "count": r.count, "density": format_density(r.density),
                      "exact": f"{r.density.numerator}/{r.density.denominator}"}
                     for r in stats.per_decade],
            "increasing_trend": stats.increasing_trend,
        })
    else:
        lines = [f"{'decade':>12} {'count':>12} {'density':>10}"]
        lines += [f"{r.upper:>12} {r.count:>12} {format_density(r.density):>10}" for r in stats.per_decade]
        lines.append(f"arithmetic: {stats.arithmetic_count} of {limit}; "
                     f"last decade denser than first: {'yes' if stats.increasing_trend else 'no'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _flag(v: bool | None) -> str:
    return "n/a" if v is None else ("arithmetic" if v else "non-arithmetic")


def cmd_discrepancy(args: argparse.Namespace) -> int:
    limit = args.limit if args.limit is not None else 0
    if limit < 0 or limit > MAX_LIMIT:
        raise PreconditionError(f"--limit must lie in [0, {MAX_LIMIT}]")
    extras = [Factorization.parse(x) for x in args.extra]
    records = discrepancy_scan(limit, extras)
    inconsistent = [r for r in records if r.oracle_vs_exact]
    if args.format == "json":
        text = dump_json({
            "limit": limit,
            "extra": [str(f) for f in extras],
            "records": [{"n": str(r.subject), "oracle": r.oracle, "exact": r.exact,
                         "theorem3": r.theorem3, "agree": r.agree} for r in records],
            "oracle_vs_exact_disagreements": len(inconsistent),
        })
    elif args.format == "csv":
        text = "n,oracle,exact,theorem3\n" + "".join(
            f"{r.subject},{_flag(r.oracle)},{_flag(r.exact)},{_flag(r.theorem3)}\n" for r in records)
    else:
        lines = [f"{r.subject}: oracle={_flag(r.oracle)} exact={_flag(r.exact)} "
                 f"theorem3={_flag(r.theorem3)}" for r in records]
        lines.append(f"{len(records)} disagreeing records; "
                     f"oracle-vs-exact disagreements: {len(inconsistent)}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_INTERNAL if inconsistent else EXIT_OK


def selftest_checks() -> list[tuple[str, bool]]:
    """Worked examples re-derived from scratch."""
    example = Factorization.parse("3^34 * 5^8 * 7^24")
    v = classify(example)
    big = classify(Factorization.parse("7^19 * 2^24"))
    return [
        ("A(3^5) = 182/3", str(mean_of_divisors(Factorization.parse("3^5"))) == "182/3"),
        ("A(75) = 62/3", str(mean_of_divisors(75)) == "62/3"),
        ("3^34 * 5^8 * 7^24 is not arithmetic", v.arithmetic is False),
        ("its witness is 3 ∤ 5^9 − 1", v.certificate.witness == "3 ∤ 5^9 − 1"),
        ("its ledger fails at 3", v.ledger.failing_primes[:1] == [3]),
        ("2^24 * 7^19 is arithmetic", big.arithmetic is True),
        ("first arithmetic numbers", first_arithmetic(12) == [1, 3, 5, 6, 7, 11, 13, 14, 15, 17, 19, 20]),
    ]


def cmd_selftest(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    checks = selftest_checks()
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(f"{sum(ok for _, ok in checks)}/{len(checks)} passed in {time.perf_counter() - start:.2f}s")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="Pollard-rho iteration cap per factorization")

    parser = _Parser(prog="arithnum", description="Decide and certify arithmetic numbers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="classify one number")
    p.add_argument("input", help="decimal integer or factored form such as '7^19 * 2^24'")
    p.add_argument("--explain", action="store_true", help="print the full certificate")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default="auto")
    p.set_defaults(func=cmd_classify)

    for name, func, helptext in (("enumerate", cmd_enumerate, "list arithmetic numbers up to a limit"),
                                 ("density", cmd_density, "per-decade density table")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--limit", type=int, required=True)
        p.add_argument("--workers", type=int, default=1, help="threads for the segmented sieve")
        if name == "enumerate":
            p.add_argument("--all", action="store_true", help="include non-arithmetic n")
        p.set_defaults(func=func)

    p = sub.add_parser("discrepancy", parents=[common], help="cross-check the criteria")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--extra", action="append", default=[], metavar="FACTORED",
                   help="additional N in factored form (repeatable)")
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("selftest", help="run the worked examples")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"arithnum: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionError as exc:
        print(f"arithnum: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"arithnum: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"arithnum: I/O error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ArithnumError as exc:
        print(f"arithnum: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
