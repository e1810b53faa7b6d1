"""Command-line front end.

Examples::

    schureq tables coeffs --n-max 10
    schureq tables poisson-rho --lambdas 0.01 0.5 1 5 10 100 --ns 2 3 4 5
    schureq model rho --family geometric --q 0.5 --n 2
    schureq model marginal --family poisson --lambda 1 --n 3 --format csv
    schureq verify --family poisson --lambda 1 --n 3
    schureq sample --pmf base.csv --n 2 --seed 7 --count 1000
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Sequence

from . import formats
from .core_dist import DEFAULT_TAIL_TOLERANCE, Geometric, Poisson
from .equilibrium import coefficient_triangle, nth_equilibrium
from .errors import (
    IntegrityError,
    NonConvergentError,
    UnsupportedDimensionError,
    ZeroMeanError,
    ZeroVarianceError,
)
from .oracle import verify_model
from .schur_model import (
    RhoMethod,
    build_model,
    correlation,
    joint_pmf,
    marginal_stats,
    sample,
    sum_pmf_array,
)

TAIL_TOL_ENV = "SCHUREQ_TAIL_TOLERANCE"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


def fixed(value: float, decimals: int) -> str:
    """Round half away from zero after snapping to 12 significant digits.

    The snap keeps binary noise such as -0.015624999999999998 from deciding
    a tie at the last printed decimal.
    """
    d = Decimal(format(value, ".12g")).quantize(
        Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP
    )
    if d == 0:
        d = abs(d)
    return f"{d:.{decimals}f}"


def _full(value: float) -> str:
    return format(value, ".17g")


def _short(value: float) -> str:
    return format(value, ".6g")


def _render(columns: Sequence[str], rows: list[Sequence[Any]], fmt: str, table_cell=_short) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(columns, r)) for r in rows], indent=2) + "\n"

    def cell(v, conv):
        return conv(v) if isinstance(v, float) else str(v)

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([cell(v, _full) for v in r])
        return buf.getvalue()
    text = [list(columns)] + [[cell(v, table_cell) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in text) for i in range(len(columns))]
    return "".join(
        "  ".join(v.rjust(w) for v, w in zip(r, widths)) + "\n" for r in text
    )


def _tail_tolerance(args) -> float:
    if args.tail_tol is not None:
        return args.tail_tol
    env = os.environ.get(TAIL_TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"{TAIL_TOL_ENV} is not a number: {env!r}") from None
    return DEFAULT_TAIL_TOLERANCE


def _base_and_n(args, need_n: bool = True):
    sources = [args.family is not None, args.pmf is not None, args.model is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --family, --pmf or --model")
    tol = _tail_tolerance(args)
    n = getattr(args, "n", None)
    if args.model is not None:
        dist, doc_n = formats.load_model_document(args.model)
        if args.tail_tol is not None or os.environ.get(TAIL_TOL_ENV):
            dist = formats.dist_from_dict(formats.dist_to_dict(dist), tol)
        n = doc_n if n is None else n
    elif args.pmf is not None:
        dist = formats.read_pmf(args.pmf, tail_tolerance=tol)
    elif args.family == "poisson":
        if args.lam is None:
            raise UsageError("--family poisson needs --lambda")
        dist = Poisson(args.lam, tail_tolerance=tol)
    else:
        if args.q is None:
            raise UsageError("--family geometric needs --q")
        dist = Geometric(args.q, tail_tolerance=tol)
    if need_n:
        if n is None:
            raise UsageError("--n is required")
        if n < 2:
            raise UsageError("--n must be at least 2")
    return dist, n


def cmd_eqdist(args) -> str:
    dist, _ = _base_and_n(args, need_n=False)
    if args.order < 0:
        raise UsageError("--order must be non-negative")
    level = nth_equilibrium(dist, args.order).levels[args.order]
    rows = [(x, float(p)) for x, p in enumerate(level.probabilities)]
    return _render(("x", "probability"), rows, args.format)


def cmd_model(args) -> str:
    dist, n = _base_and_n(args)
    model = build_model(dist, n)
    what = args.quantity
    if what == "marginal":
        if args.format == "csv":
            return formats.format_pmf(model.marginal.probabilities)
        rows = [(x, float(p)) for x, p in enumerate(model.marginal.probabilities)]
        return _render(("index", "probability"), rows, args.format)
    if what == "sum":
        rows = [(z, float(p)) for z, p in enumerate(sum_pmf_array(model))]
        return _render(("z", "probability"), rows, args.format)
    if what == "joint":
        if not args.at:
            raise UsageError("model joint needs --at x1 [x2 ...]")
        if len(args.at) > n:
            raise UsageError(f"--at takes at most n={n} coordinates")
        value = joint_pmf(model, args.at)
        return _render(("x", "probability"), [(" ".join(map(str, args.at)), value)], args.format)
    if what == "rho":
        res = correlation(model, args.method)
        return _render(
            ("method", "rho"),
            [(res.method.value, res.value)],
            args.format,
            table_cell=lambda v: fixed(v, 5),
        )
    mean, var = marginal_stats(model)
    rows = [("mean", mean), ("variance", var)]
    rows += [(f"moment_{j}", model.marginal.moment(j)) for j in range(1, args.max_order + 1)]
    return _render(("quantity", "value"), rows, args.format)


def cmd_tables(args) -> str:
    if args.table == "coeffs":
        if args.n_max < 1:
            raise UsageError("--n-max must be positive")
        tri = coefficient_triangle(args.n_max)
        if args.format == "csv":
            return tri.to_csv(n_min=args.n_min)
        ns = list(range(args.n_min, args.n_max + 1))
        rows = [
            [r] + [str(tri[n, r]) if r <= n else "" for n in ns]
            for r in range(1, args.n_max + 1)
        ]
        if args.format == "json":
            doc = {str(n): {str(r): str(tri[n, r]) for r in range(1, n + 1)} for n in ns}
            return json.dumps(doc, indent=2) + "\n"
        return _render(["r"] + [str(n) for n in ns], rows, "table")
    lambdas = args.lambdas
    rows = []
    for n in args.ns:
        row = [n]
        for lam in lambdas:
            model = build_model(Poisson(lam, tail_tolerance=_tail_tolerance(args)), n)
            row.append(correlation(model, args.method).value)
        rows.append(row)
    columns = ["n"] + [format(lam, "g") for lam in lambdas]
    return _render(columns, rows, args.format, table_cell=lambda v: fixed(v, args.decimals))


def cmd_verify(args) -> tuple[str, int]:
    dist, n = _base_and_n(args)
    report = verify_model(build_model(dist, n))
    text = report.to_json() + "\n" if args.format == "json" else report.to_table() + "\n"
    return text, EXIT_OK if report.passed else EXIT_VERIFY


def cmd_sample(args) -> str:
    dist, n = _base_and_n(args)
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    draws = sample(build_model(dist, n), args.seed, args.count)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{i + 1}" for i in range(n)])
    writer.writerows(draws.tolist())
    return buf.getvalue()


def _add_base_options(p: argparse.ArgumentParser, with_n: bool = True) -> None:
    g = p.add_argument_group("base distribution")
    g.add_argument("--family", choices=("poisson", "geometric"))
    g.add_argument("--lambda", dest="lam", type=float, help="Poisson rate")
    g.add_argument("--q", type=float, help="geometric ratio, S(x) = q**x")
    g.add_argument("--pmf", help="pmf file: one probability per line or index,probability CSV")
    g.add_argument("--model", help="JSON model document {base, n, tail_tolerance}")
    g.add_argument(
        "--tail-tol",
        type=float,
        help=f"tail mass allowed beyond truncation (env {TAIL_TOL_ENV})",
    )
    if with_n:
        p.add_argument("--n", type=int, help="dimension of the model")


def _add_format(p: argparse.ArgumentParser, default: str = "table") -> None:
    p.add_argument("--format", choices=("json", "csv", "table"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schureq",
        description="Discrete Schur-constant multivariate equilibrium models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eqdist", help="pmf of the k-th order equilibrium distribution")
    _add_base_options(p, with_n=False)
    p.add_argument("--order", "-k", type=int, default=1)
    _add_format(p)
    p.set_defaults(func=cmd_eqdist)

    p = sub.add_parser("model", help="quantities of the n-dimensional model")
    p.add_argument("quantity", choices=("marginal", "sum", "joint", "rho", "moments"))
    _add_base_options(p)
    p.add_argument("--at", type=int, nargs="+", help="coordinates for 'joint'")
    p.add_argument(
        "--method", choices=[m.value for m in RhoMethod], default=RhoMethod.MARGINAL_FORM.value
    )
    p.add_argument("--max-order", type=int, default=4, help="highest moment for 'moments'")
    _add_format(p)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("tables", help="coefficient and correlation tables")
    tsub = p.add_subparsers(dest="table", required=True)
    t = tsub.add_parser("coeffs", help="antidifference coefficients a_r(n)")
    t.add_argument("--n-max", type=int, default=10)
    t.add_argument("--n-min", type=int, default=2)
    _add_format(t)
    t.set_defaults(func=cmd_tables)
    t = tsub.add_parser("poisson-rho", help="correlation grid for Poisson bases")
    t.add_argument("--lambdas", type=float, nargs="+", default=[0.01, 0.5, 1, 5, 10, 100])
    t.add_argument("--ns", type=int, nargs="+", default=[2, 3, 4, 5])
    t.add_argument(
        "--method", choices=[m.value for m in RhoMethod], default=RhoMethod.MARGINAL_FORM.value
    )
    t.add_argument("--decimals", type=int, default=5)
    t.add_argument("--tail-tol", type=float)
    _add_format(t)
    t.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run the cross-path verification suite")
    _add_base_options(p)
    _add_format(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="draw exchangeable vectors as CSV")
    _add_base_options(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1000)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except (UsageError, UnsupportedDimensionError, ValueError, OSError) as exc:
        print(f"schureq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZeroMeanError, NonConvergentError, ZeroVarianceError, IntegrityError) as exc:
        print(f"schureq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    status = EXIT_OK
    if isinstance(out, tuple):
        out, status = out
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
