"""Command line interface: ``basscensus {table,count,verify,units,hilbert}``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from . import class_numbers as cn
from . import counting as ct
from . import cyclotomic as cyc
from . import quaternion as quat
from .errors import CensusError, PrecisionError, UsageError

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_case(text):
    """'3', '3,6' or '(3, 6)' -> normalized case tuple."""
    body = text.strip().strip("()[]")
    try:
        parts = tuple(int(x) for x in body.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read case {text!r}") from None
    try:
        return cyc.normalize_case(parts)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_prime(text):
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if p not in ct.PRIMES:
        raise argparse.ArgumentTypeError(f"p must be one of {ct.PRIMES}")
    return p


def _case_str(case):
    return str(case[0]) if len(case) == 1 else f"({case[0]},{case[1]})"


def _o(case):
    return f"o({case[0]})" if len(case) == 1 else f"o{_case_str(case)}"


def _emit(args, payload, markdown):
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command}
        doc.update(payload)
        print(json.dumps(doc, indent=2))
    else:
        print(markdown)


# ---------------------------------------------------------------------------

def cmd_table(args):
    primes = args.p or list(ct.PRIMES)
    rows = [ct.ssp2_total(p, args.source, args.precision) for p in primes]
    header = ["p"] + [_case_str(c) for c in ct.COLUMNS] + ["total"]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for r in rows:
        cells = [str(r.p)]
        for c in ct.COLUMNS:
            res = r.results[c]
            cells.append(f"{res.value}" + ("*" if res.source != "computed" else ""))
        cells.append(str(r.total))
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")
    lines.append("* read from the frozen table; all other entries are computed.")
    payload = {
        "columns": [list(c) for c in ct.COLUMNS],
        "rows": [{
            "p": r.p,
            "values": [r.results[c].value for c in ct.COLUMNS],
            "sources": [r.results[c].source for c in ct.COLUMNS],
            "o1": r.results[(1,)].value,
            "o2": r.results[(2,)].value,
            "total": r.total,
        } for r in rows],
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_count(args):
    res = ct.count(args.case, args.p, args.source, args.precision)
    lines = [f"{_o(res.case)} at p={res.p}: {res.value}  [{res.source}]"]
    for name, g in zip(res.classes, res.genera):
        lines.append(f"  {name}: h = {g.h} ({g.method})")
    if args.trace:
        lines += [f"  . {t}" for t in res.trace]
    _emit(args, {"result": res.as_dict()}, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args):
    res = ct.count(args.case, args.p, args.source, args.precision)
    ok = res.value == args.expect
    status = "PASS" if ok else "FAIL"
    md = (f"{status}: {_o(res.case)} at p={res.p} = {res.value}, "
          f"expected {args.expect} [{res.source}]")
    _emit(args, {"case": list(res.case), "p": res.p, "expected": args.expect,
                 "value": res.value, "source": res.source, "ok": ok}, md)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_units(args):
    p = args.p
    summary = cn.unit_reduction_summary(p)
    dc = cn.unit_image_double_cosets(p) if p in (2, 3) else None
    h_exact = cn.h_maximal_quaternion_exact(p)
    payload = {
        "p": p,
        "class_number": int(h_exact),
        "mass": str(cn.mass(p)),
        "units": summary,
        "serre_kernel_mod_p": len(cn.serre_kernel(p, "p")),
    }
    lines = [f"maximal order at p={p}: h = {h_exact}, mass = {cn.mass(p)}",
             f"  |O^x| = {summary['global_units']}",
             f"  (O/pO)^x: {summary['ring_units']}, image {summary['ring_image']}",
             f"  (O/P)^x: {summary['field_units']}, image {summary['field_image']}",
             f"  units = 1 mod pO: {payload['serre_kernel_mod_p']}"]
    if dc is not None:
        payload["gamma_double_cosets"] = dc.count
        lines.append(f"  double cosets for the (2,{2 * p}) congruence genus: {dc.count}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_hilbert(args):
    try:
        a, b = Fraction(args.a), Fraction(args.b)
    except (ValueError, ZeroDivisionError):
        raise UsageError("a and b must be rationals") from None
    place = args.place
    value = quat.hilbert_symbol(a, b, place if place in (quat.INF, "∞") else int(place))
    _emit(args, {"a": str(a), "b": str(b), "place": place, "value": value},
          f"({a}, {b})_{place} = {value}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def _global_options(parser, with_defaults):
    # subcommands repeat these without defaults so they do not override the top level
    fmt, prec = ("markdown", 4) if with_defaults else (argparse.SUPPRESS, argparse.SUPPRESS)
    parser.add_argument("--format", choices=("markdown", "json"), default=fmt)
    parser.add_argument("--precision", type=int, metavar="k", default=prec,
                        help="work modulo p^k in local computations (default 4)")
    return parser


def build_parser():
    top = _global_options(argparse.ArgumentParser(add_help=False), True)
    common = _global_options(argparse.ArgumentParser(add_help=False), False)

    parser = _Parser(prog="basscensus", parents=[top],
                     description="Lattice census over cyclotomic orders tensored with "
                                 "maximal quaternion orders.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source_opt(sp):
        sp.add_argument("--source", choices=ct.SOURCES, default="auto")

    sp = sub.add_parser("table", parents=[common], help="the census table and totals")
    sp.add_argument("--p", type=parse_prime, action="append")
    source_opt(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("count", parents=[common], help="o(case) at one prime")
    sp.add_argument("case", type=parse_case)
    sp.add_argument("--p", type=parse_prime, required=True)
    sp.add_argument("--trace", action="store_true")
    source_opt(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("verify", parents=[common], help="compare o(case) with a value")
    sp.add_argument("--case", type=parse_case, required=True)
    sp.add_argument("--p", type=parse_prime, required=True)
    sp.add_argument("--expect", type=int, required=True)
    source_opt(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("units", parents=[common], help="unit groups and class number")
    sp.add_argument("--p", type=parse_prime, required=True)
    sp.set_defaults(func=cmd_units)

    sp = sub.add_parser("hilbert", parents=[common], help="Hilbert symbol (a, b)_v")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("place", help="a prime or 'inf'")
    sp.set_defaults(func=cmd_hilbert)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 2:
        parser.error("--precision must be at least 2")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"basscensus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"basscensus: precision error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except CensusError as exc:
        print(f"basscensus: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
