"""Command-line surface: parse a constraint file, run the pipeline, and
render series, bases, parametric families, counts, enumerations, weighted
series, and verification reports.

Exit status: 0 on success, 1 when `verify` reports mismatches, 2 on errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys as _sys

from . import basis as _basis
from . import dioph as _dioph
from . import oracle as _oracle
from .polyring import (
    PolyError,
    coefficient_of,
    expand_truncated,
    normalize,
    parse_rational,
    render_rational,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="diosolve",
        description="Exact solver for linear Diophantine systems over "
        "nonnegative integers via generating functions.",
    )
    parser.add_argument(
        "--format",
        choices=("text", "machine"),
        default="text",
        help="output format (machine is JSON)",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="trace engine steps")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, engine=True):
        p.add_argument(
            "input",
            help="constraint file (line format or JSON); '-' reads stdin",
        )
        if engine:
            p.add_argument(
                "--engine",
                choices=("xin", "elliott"),
                default="xin",
                help="series engine (default: xin)",
            )
            p.add_argument(
                "--check",
                action="store_true",
                help="run both engines and require equal results",
            )
            p.add_argument(
                "--step-ceiling",
                type=int,
                default=10**6,
                help="engine rewriting-step limit (default 10^6)",
            )

    p = sub.add_parser("series", help="characteristic series of the solution set")
    add_common(p)

    p = sub.add_parser("basis", help="minimal solutions / parametric families")
    add_common(p)

    p = sub.add_parser("enumerate", help="list solutions in a box")
    add_common(p, engine=False)
    p.add_argument("--box", type=int, default=10, help="per-coordinate bound (default 10)")

    p = sub.add_parser("count", help="Euler count for an all-equation system")
    add_common(p, engine=False)
    p.add_argument(
        "--rhs",
        help="comma-separated right-hand sides (defaults to the constants in the file)",
    )

    p = sub.add_parser("weight", help="weighted (graded) series and slices")
    add_common(p)
    p.add_argument(
        "--weights",
        required=True,
        help="comma-separated var=weight assignments, e.g. x3=-4,x6=-5,y=1",
    )
    p.add_argument("--tracker", default="t", help="grading variable name (default t)")
    p.add_argument(
        "--slice",
        dest="slices",
        action="append",
        type=int,
        default=[],
        help="also print the coefficient of tracker^k (repeatable)",
    )

    p = sub.add_parser("verify", help="cross-check the series against brute force")
    add_common(p)
    p.add_argument("--degree", type=int, default=12, help="total-degree bound (default 12)")

    return parser


def _read_input(path):
    if path == "-":
        return _sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _series(sys_, args):
    opts = _dioph.SolveOptions(engine=args.engine, step_ceiling=args.step_ceiling)
    chi = _dioph.characteristic_series(sys_, opts)
    if args.check:
        other = "elliott" if args.engine == "xin" else "xin"
        chi2 = _dioph.characteristic_series(
            sys_, _dioph.SolveOptions(engine=other, step_ceiling=args.step_ceiling)
        )
        from .polyring import rf_equal

        if not rf_equal(chi, chi2):
            raise PolyError(
                "engine cross-check failed: %s vs %s" % (chi.render(), chi2.render())
            )
    return chi


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)
    try:
        return _dispatch(args)
    except (PolyError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return 2


def _dispatch(args):
    text = _read_input(args.input)
    system = _dioph.parse_system(text)
    out = _sys.stdout
    machine = args.format == "machine"

    if args.command == "series":
        chi = _series(system, args)
        if machine:
            json.dump({"series": render_rational(chi)}, out)
            out.write("\n")
        else:
            out.write(render_rational(chi) + "\n")
        return 0

    if args.command == "basis":
        doc = {}
        lines = []
        if system.is_homogeneous():
            hb = _basis.hilbert_basis(_dioph.normalize_system(system))
            doc["minimal"] = [list(t) for t in hb.tuples()]
            lines.append("minimal solutions:")
            for t in hb.tuples():
                lines.append("  (%s)" % ",".join(str(x) for x in t))
        chi = _series(system, args)
        fams = _basis.parametric_form(chi)
        if fams is None:
            doc["families"] = None
            lines.append("parametric form: unavailable (numerator is not all ones)")
        else:
            doc["families"] = [
                {
                    "offset": list(off.as_tuple(system.variables)),
                    "generators": [list(g.as_tuple(system.variables)) for g in gens],
                }
                for off, gens in fams
            ]
            lines.append("parametric families (offset + N-combinations of generators):")
            for off, gens in fams:
                lines.append(
                    "  (%s) + <%s>"
                    % (
                        ",".join(str(x) for x in off.as_tuple(system.variables)),
                        ", ".join(
                            "(%s)" % ",".join(str(x) for x in g.as_tuple(system.variables))
                            for g in gens
                        ),
                    )
                )
        doc["series"] = render_rational(chi)
        lines.append("series: %s" % render_rational(chi))
        if machine:
            json.dump(doc, out)
            out.write("\n")
        else:
            out.write("\n".join(lines) + "\n")
        return 0

    if args.command == "enumerate":
        sols = _oracle.brute_solutions(_dioph.normalize_system(system), args.box)
        if machine:
            json.dump(
                {"variables": system.variables, "box": args.box, "solutions": [list(s) for s in sols]},
                out,
            )
            out.write("\n")
        else:
            out.write("variables: %s\n" % " ".join(system.variables))
            for s in sols:
                out.write("(%s)\n" % ",".join(str(x) for x in s))
        return 0

    if args.command == "count":
        if args.rhs:
            rhs = [int(x) for x in args.rhs.split(",")]
            eqs = _dioph.ConstraintSystem(
                system.variables,
                [
                    _dioph.Constraint(c.coeffs, 0, c.relation)
                    for c in system.constraints
                ],
            )
        else:
            rhs = [-c.constant for c in system.constraints]
            eqs = _dioph.ConstraintSystem(
                system.variables,
                [_dioph.Constraint(c.coeffs, 0, c.relation) for c in system.constraints],
            )
        n = _dioph.euler_count(eqs, rhs)
        sols = _dioph.euler_solutions(eqs, rhs)
        if machine:
            json.dump(
                {
                    "count": n,
                    "solutions": [list(s.as_tuple(system.variables)) for s in sols],
                },
                out,
            )
            out.write("\n")
        else:
            out.write("%d\n" % n)
            for s in sols:
                out.write("(%s)\n" % ",".join(str(x) for x in s.as_tuple(system.variables)))
        return 0

    if args.command == "weight":
        weights = {}
        for item in args.weights.split(","):
            name, _, val = item.partition("=")
            if not val:
                raise ValueError("weights must look like var=integer")
            weights[name.strip()] = int(val)
        chi = _series(system, args)
        omega = _dioph.weight_substitution(chi, weights, args.tracker)
        doc = {"weighted": render_rational(omega), "slices": {}}
        lines = ["weighted series: %s" % render_rational(omega)]
        for k in args.slices:
            slice_k = coefficient_of(omega, args.tracker, k)
            doc["slices"][str(k)] = render_rational(slice_k)
            lines.append("slice %d: %s" % (k, render_rational(slice_k)))
        if machine:
            json.dump(doc, out)
            out.write("\n")
        else:
            out.write("\n".join(lines) + "\n")
        return 0

    if args.command == "verify":
        chi = _series(system, args)
        report = _oracle.check_series(chi, _dioph.normalize_system(system), args.degree)
        if machine:
            json.dump(report.to_machine(), out)
            out.write("\n")
        else:
            out.write(report.render() + "\n")
        return 0 if report.clean() else 1

    raise ValueError("unknown command %r" % args.command)


if __name__ == "__main__":
    raise SystemExit(main())
