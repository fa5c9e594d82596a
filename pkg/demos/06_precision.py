"""When 53 bits cannot see two roots apart, the solver raises precision."""

from fractions import Fraction

from boxroots import IBox, SolverConfig, parse_system, solve_adaptive

# (2^60 x - 2^60)(2^60 x - 2^60 - 1): roots at 1 and 1 + 2^-60, closer
# together than one ulp of binary64 near 1.  Expanded coefficients are
# exact integers, so nothing is lost in parsing.
TEXT = "vars x\np: %d*x^2 - %d*x + %d" % (2**120, 2**121 + 2**60, 2**120 + 2**60)

sys_ = parse_system(TEXT)


def run(p_max):
    cfg = SolverConfig(omega=0.0, p0=53, p_max=p_max)
    rep = solve_adaptive(sys_, cfg, IBox.from_bounds([(0, 2)], cfg.p0))
    st = rep.stats
    print("p_max=%d: status %d, %d solution(s), %d undetermined" % (
        p_max, rep.status, len(rep.solutions), len(rep.undetermined)))
    print("  precision passes:", st.precision_passes,
          " highest used:", st.max_precision_used)
    print("  escalation triggers: rounding-dominated=%d  no-progress=%d  "
          "newton-step-drowned=%d" % (st.c1, st.c2, st.c3))
    return rep


# Capped at native doubles the cluster is indistinguishable from a
# double root; the solver refuses to guess and reports the region.
run(53)

# With headroom it doubles precision until the roots separate.
rep = run(256)
roots = (Fraction(1), 1 + Fraction(1, 2**60))
for s in sorted(rep.solutions, key=lambda s: s.box.ivs[0].lo):
    lo, hi = s.box.ivs[0].to_fractions()
    inside = [r for r in roots if lo <= r <= hi]
    print("  box of width %.2e at %d bits contains root %s"
          % (s.box.width(), s.prec,
             "1" if inside == [Fraction(1)] else "1 + 2^-60"))
