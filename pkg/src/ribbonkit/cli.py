"""Command-line entry point: `ribbonkit <subcommand> ...`.

Exit codes: 0 success, 1 parse error, 2 size ceiling exceeded, 3 internal
consistency failure, 4 non-primitive matrix, 5 screening target missing,
6 inconsistent knot record, 64 usage error.  Errors print one line
`ribbonkit: <kind>: <reason>` to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds, dynamics, reports, screen, selftest
from . import homology as hom
from .cover import DEFAULT_COMPLEX_CEILING, build_cover, count_generators, cover_homology_experimental
from .errors import MissingTargetError, RibbonkitError
from .grid import load_grid
from .permanent import DEFAULT_CEILING as PERMANENT_CEILING

EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be positive")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{v} must be positive")
    return v


def _input_name(path) -> str:
    return Path(path).name


def cmd_homology(args):
    g = load_grid(args.grid)
    res = hom.compute(g, args.ceiling or hom.DEFAULT_CEILING, args.workers)
    return reports.homology_report(_input_name(args.grid), res)


def cmd_cover(args):
    g = load_grid(args.grid)
    d = build_cover(g, args.n, args.sheet_sign)
    count = count_generators(d, args.ceiling or PERMANENT_CEILING, args.workers)
    cover_hom = cover_homology_experimental(d, args.complex_ceiling) if args.homology else None
    return reports.cover_report(_input_name(args.grid), g.size, args.n, count, cover_hom)


def cmd_dilatation(args):
    m = dynamics.load_matrix(args.matrix)
    est = dynamics.trace_limit_check(m, max(args.n_max, 2), args.tol)
    return reports.dilatation_report(_input_name(args.matrix), est, args.tol)


def _bound_table():
    def rhs_report(name, fn, keys):
        def run(p):
            interval = fn(*(p[k] for k in keys))
            measured = p.get("measured")
            rep = bounds.BoundReport(name, {k: p[k] for k in keys}, interval.upper, interval)
            if measured is not None:
                ok, near = bounds.check_measured(measured, interval)
                rep = bounds.BoundReport(name, rep.inputs, rep.bound_value, interval, measured, ok, near)
            return rep

        return run

    return {
        "dilatation-arc": (("delta",), lambda p: bounds.dilatation_arc_bound(p["delta"], p.get("measured"))),
        "dimension-root": (("delta", "n"), rhs_report("dimension-root", bounds.dimension_root_bound, ("delta", "n"))),
        "volume-arc": (("g", "delta"), lambda p: bounds.volume_arc_bound(p["g"], p["delta"], p.get("measured"))),
        "kojima-mcshane": (("g", "lambda"),
                           lambda p: bounds.kojima_mcshane_bound(p["g"], p["lambda"], p.get("measured"))),
        "entropy-relation": (("lambda_K", "g_K"),
                             lambda p: bounds.entropy_relation_bound(p["lambda_K"], p["g_K"], p.get("measured"))),
        "cornish-growth": (("c", "lambda", "g", "n"),
                           rhs_report("cornish-growth", bounds.cornish_growth_bound, ("c", "lambda", "g", "n"))),
        "volume-ratio": (("g", "b"), rhs_report("volume-ratio", bounds.volume_ratio_constant, ("g", "b"))),
    }


_INT_PARAMS = {"delta", "n", "g", "g_K"}


def cmd_bounds(args):
    table = _bound_table()
    if args.name not in table:
        raise UsageError(f"unknown bound {args.name!r}; choose from {', '.join(sorted(table))}")
    keys, run = table[args.name]
    params = {}
    for item in args.params:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        if key not in keys and key != "measured":
            raise UsageError(f"{args.name} takes {', '.join(keys)} (and optional measured), not {key!r}")
        try:
            params[key] = int(value) if key in _INT_PARAMS else float(value)
        except ValueError:
            raise UsageError(f"bad value for {key}: {value!r}") from None
    missing = [k for k in keys if k not in params]
    if missing:
        raise UsageError(f"{args.name} needs {', '.join(missing)}")
    try:
        rep = run(params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return reports.bound_report(rep)


def cmd_screen(args):
    db_path = args.db or screen.demo_database_path()
    db = [
        screen.enrich_record(r, args.ceiling or hom.DEFAULT_CEILING, args.workers, tuple(args.cover_sheets))
        for r in screen.load_database(db_path)
    ]
    matches = [r for r in db if r.name == args.target]
    if not matches:
        raise MissingTargetError(f"target {args.target!r} not in {_input_name(db_path)}")
    verdicts = screen.screen_database(matches[0], db, args.b, args.experimental, args.bigraded)
    return reports.screen_report(args.target, verdicts)


def cmd_selftest(args):
    return selftest.run_all(args.ceiling or hom.DEFAULT_CEILING, args.workers)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--workers", type=_positive_int, default=1, help="worker processes (default 1)")
    common.add_argument("--ceiling", type=_positive_int, default=None,
                        help="size ceiling: grid size for homology, size*n for cover permanents")

    p = _Parser(prog="ribbonkit", description="Grid homology, covers, dilatations and ribbon screening.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("homology", parents=[common], help="knot Floer homology of a grid")
    s.add_argument("grid")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("cover", parents=[common], help="generator count of the n-fold branched cover")
    s.add_argument("grid")
    s.add_argument("n", type=_positive_int)
    s.add_argument("--homology", action="store_true", help="also compute the cover complex homology (experimental)")
    s.add_argument("--complex-ceiling", type=_positive_int, default=DEFAULT_COMPLEX_CEILING)
    s.add_argument("--sheet-sign", type=int, choices=(1, -1), default=1)
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("dilatation", parents=[common], help="Perron-Frobenius data of an incidence matrix")
    s.add_argument("matrix")
    s.add_argument("--tol", type=_positive_float, default=1e-9)
    s.add_argument("--n-max", type=_positive_int, default=40)
    s.set_defaults(func=cmd_dilatation)

    s = sub.add_parser("bounds", parents=[common], help="evaluate a named inequality, e.g. volume-arc g=1 delta=6")
    s.add_argument("name")
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("screen", parents=[common], help="screen a knot database against a target")
    s.add_argument("target")
    s.add_argument("--db", default=None, help="JSONL knot database (default: the bundled demo)")
    s.add_argument("--b", type=_positive_float, default=None, help="volume constant b for rule R8")
    s.add_argument("--bigraded", action="store_true", help="R2 compares full bigraded tables from the engine")
    s.add_argument("--experimental", action="store_true", help="enable R9 (branched-cover HFK)")
    s.add_argument("--cover-sheets", type=_positive_int, nargs="*", default=[],
                   help="compute cover HFK for these sheet counts during enrichment")
    s.set_defaults(func=cmd_screen)

    s = sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = args.func(args)
    except UsageError as exc:
        print(f"ribbonkit: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RibbonkitError as exc:
        print(f"ribbonkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"ribbonkit: GridParseError: cannot read {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1
    sys.stdout.write(reports.render(payload, args.format))
    if payload["command"] == "selftest" and not payload["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
