"""Command-line frontend.

Three subcommands: `solve` isolates the roots of a system file over a
box (the subcommand may be omitted: a leading option implies it),
`bench` runs the strategy-comparison table on seeded random systems,
`gen` prints such a system in the solve input format.

Exit codes: a solve exits with its status (0 complete, 1 precision
budget exhausted, 2 width-floor boxes remain); 64 flags usage errors
(bad flags, malformed domain), 65 an unreadable or unparsable system
file.  JSON output carries every interval bound twice, as a decimal
string and as an exact hexadecimal float.
"""

import argparse
import json
import sys

from fractions import Fraction

from .bench import bench, format_table
from .enclosure import STRATEGIES
from .interval import IBox
from .mpoly import SystemSyntaxError, NonSquareError, parse_system
from .randsys import random_system
from .solver import SolverConfig, refine_solutions, solve_adaptive

EXIT_USAGE = 64
EXIT_PARSE = 65


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract wants 64
    def error(self, message):
        raise _UsageError(message)


def parse_domain(spec, m):
    """`[lo,hi];[lo,hi];...` with decimal or a/b rational bounds."""
    parts = [p.strip() for p in spec.split(";") if p.strip()]
    if len(parts) != m:
        raise ValueError("domain has %d components, system has %d variables"
                         % (len(parts), m))
    bounds = []
    for part in parts:
        if not (part.startswith("[") and part.endswith("]")):
            raise ValueError("bad domain component %r" % part)
        inner = part[1:-1].split(",")
        if len(inner) != 2:
            raise ValueError("bad domain component %r" % part)
        lo, hi = (Fraction(b.strip()) for b in inner)
        if lo > hi:
            raise ValueError("empty domain component %r" % part)
        bounds.append((lo, hi))
    return bounds


def hexfloat(value):
    """Exact normalized hexadecimal float of a dyadic rational."""
    f = Fraction(value)
    if f == 0:
        return "0x0p+0"
    sign = "-" if f < 0 else ""
    num, den = abs(f).numerator, abs(f).denominator
    shift = num.bit_length() - 1 - (den.bit_length() - 1)
    # mantissa in [1, 2): num / den = (1 + frac) * 2^shift
    frac = abs(f) / Fraction(2) ** shift - 1
    if frac < 0:
        shift -= 1
        frac = abs(f) / Fraction(2) ** shift - 1
    digits = []
    while frac:
        frac *= 16
        d = int(frac)
        digits.append("%x" % d)
        frac -= d
    mant = "1." + "".join(digits) if digits else "1"
    return "%s0x%sp%+d" % (sign, mant, shift)


def _box_json(box):
    dec = [[str(iv.lo), str(iv.hi)] for iv in box.ivs]
    hx = [[hexfloat(lo), hexfloat(hi)] for lo, hi in
          (iv.to_fractions() for iv in box.ivs)]
    return dec, hx


def _report_json(report, solutions):
    sols = []
    for s in solutions:
        dec, hx = _box_json(s.box)
        sols.append({"box": dec, "precision": s.prec, "hex": hx})
    undet = []
    for u in report.undetermined:
        dec, _ = _box_json(u.box)
        undet.append({"box": dec, "reason": u.reason})
    st = report.stats
    stats = {
        "boxes_explored": st.boxes_explored,
        "node_counts": {"n1": st.n1, "n2": st.n2, "n3": st.n3,
                        "n4": st.n4, "n5": st.n5},
        "precision_triggers": {"c1": st.c1, "c2": st.c2, "c3": st.c3},
        "evals": {"f": st.counters.evals_f, "j": st.counters.evals_j,
                  "h": st.counters.evals_h},
        "max_precision_used": st.max_precision_used,
        "wall_ms": st.wall_ms,
    }
    return {"status": report.status, "solutions": sols,
            "undetermined": undet, "stats": stats}


def _print_text(report, solutions, varnames, show_stats, out):
    print("status: %d" % report.status, file=out)
    for k, s in enumerate(solutions, 1):
        print("solution %d (prec %d):" % (k, s.prec), file=out)
        for name, iv in zip(varnames, s.box.ivs):
            print("  %s in [%s, %s]" % (name, iv.lo, iv.hi), file=out)
    for k, u in enumerate(report.undetermined, 1):
        print("undetermined %d (%s, prec %d):" % (k, u.reason, u.prec),
              file=out)
        for name, iv in zip(varnames, u.box.ivs):
            print("  %s in [%s, %s]" % (name, iv.lo, iv.hi), file=out)
    if show_stats:
        st = report.stats
        print("stats:", file=out)
        print("  boxes explored: %d" % st.boxes_explored, file=out)
        print("  nodes: n1=%d n2=%d n3=%d n4=%d n5=%d deferred=%d"
              % (st.n1, st.n2, st.n3, st.n4, st.n5, st.prec_deferred),
              file=out)
        print("  precision triggers: c1=%d c2=%d c3=%d"
              % (st.c1, st.c2, st.c3), file=out)
        print("  precision passes: %s" % st.precision_passes, file=out)
        print("  evals: f=%d j=%d h=%d (h shared %d)"
              % (st.counters.evals_f, st.counters.evals_j,
                 st.counters.evals_h, st.counters.shared_h), file=out)
        print("  max precision used: %d" % st.max_precision_used, file=out)
        print("  wall: %.2f ms" % st.wall_ms, file=out)


def _solve_parser():
    p = _Parser(prog="boxroots solve", add_help=True)
    p.add_argument("--system", required=True, metavar="FILE")
    p.add_argument("--domain", required=True, metavar="SPEC",
                   help="semicolon-separated intervals [lo,hi];...")
    p.add_argument("--min-width", required=True, type=float, metavar="R")
    p.add_argument("--precision", required=True, type=int, metavar="P")
    p.add_argument("--max-precision", required=True, type=int,
                   metavar="PMAX")
    p.add_argument("--strategy", type=int, choices=(1, 2, 3, 4), default=1)
    p.add_argument("--stats", action="store_true")
    p.add_argument("--refine", type=float, metavar="R2")
    p.add_argument("--output", choices=("json", "text"), default="text")
    return p


def cmd_solve(argv, out=None):
    out = out if out is not None else sys.stdout
    args = _solve_parser().parse_args(argv)
    try:
        with open(args.system) as fh:
            text = fh.read()
        system = parse_system(text)
    except OSError as exc:
        print("cannot read system: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except (SystemSyntaxError, NonSquareError) as exc:
        print("bad system: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    try:
        bounds = parse_domain(args.domain, system.m)
        cfg = SolverConfig(omega=args.min_width, p0=args.precision,
                           p_max=args.max_precision,
                           strategy=STRATEGIES[args.strategy])
    except ValueError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    X0 = IBox.from_bounds(bounds, cfg.p0)
    report = solve_adaptive(system, cfg, X0)
    solutions = report.solutions
    if args.refine is not None:
        solutions = refine_solutions(system, report, args.refine)
    if args.output == "json":
        json.dump(_report_json(report, solutions), out, indent=2)
        out.write("\n")
    else:
        _print_text(report, solutions, system.varnames, args.stats, out)
    return report.status


def cmd_bench(argv, out=None):
    out = out if out is not None else sys.stdout
    p = _Parser(prog="boxroots bench")
    p.add_argument("--size", action="append", required=True, metavar="MxD",
                   help="system shape, e.g. 2x16 (repeatable)")
    p.add_argument("--seeds", default="1", metavar="S1,S2,...")
    p.add_argument("--strategies", default="1,2,3,4", metavar="I,J,...")
    p.add_argument("--coeff-bits", type=int, default=8)
    p.add_argument("--min-width", type=float, default=1e-6)
    p.add_argument("--precision", type=int, default=53)
    p.add_argument("--max-precision", type=int, default=113)
    p.add_argument("--rows", action="store_true",
                   help="print every row, not just the table")
    args = p.parse_args(argv)
    try:
        sizes = []
        for s in args.size:
            m, d = s.lower().split("x")
            sizes.append((int(m), int(d)))
        seeds = tuple(int(s) for s in args.seeds.split(","))
        strategies = tuple(int(s) for s in args.strategies.split(","))
        if not all(s in STRATEGIES for s in strategies):
            raise ValueError("strategies must be among 1,2,3,4")
        cfg = SolverConfig(omega=args.min_width, p0=args.precision,
                           p_max=args.max_precision)
    except ValueError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    rows = []
    for m, d in sizes:
        rows += bench(m, d, strategies=strategies, seeds=seeds, cfg=cfg,
                      coeff_bits=args.coeff_bits)
    if args.rows:
        for r in rows:
            print(r, file=out)
    print(format_table(rows), file=out)
    return 0


def cmd_gen(argv, out=None):
    out = out if out is not None else sys.stdout
    p = _Parser(prog="boxroots gen")
    p.add_argument("--vars", type=int, required=True, metavar="M")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.add_argument("--coeff-bits", type=int, default=8)
    p.add_argument("--seed", type=int, required=True)
    args = p.parse_args(argv)
    try:
        system = random_system(args.vars, args.degree, args.coeff_bits,
                               args.seed)
    except ValueError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    print(system.to_text(), file=out)
    return 0


_USAGE = """\
usage: boxroots {solve|bench|gen} [options]
       boxroots --system FILE --domain SPEC --min-width R
                --precision P --max-precision PMAX [--strategy 1..4]
                [--stats] [--refine R2] [--output json|text]"""


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    commands = {"solve": cmd_solve, "bench": cmd_bench, "gen": cmd_gen}
    if argv and argv[0] in ("-h", "--help"):
        print(_USAGE)
        return 0
    if argv and argv[0] in commands:
        cmd, rest = commands[argv[0]], argv[1:]
    elif argv and argv[0].startswith("-"):
        # bare option form implies solve
        cmd, rest = cmd_solve, argv
    else:
        print(_USAGE, file=sys.stderr)
        return EXIT_USAGE
    try:
        return cmd(rest)
    except _UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
