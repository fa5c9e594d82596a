"""Parsing a system, taking derivatives, and Horner evaluation."""

from fractions import Fraction

from boxroots import IBox, parse_system

TEXT = """\
# Intersection of a cubic curve with a tilted line.
vars x y
p: x^3 - 2*x*y + 1
q: 3*x + y - 2
"""

sys_ = parse_system(TEXT)
print("variables:", sys_.varnames)
print("equations:", sys_.names)
for name, p in zip(sys_.names, sys_.polys):
    print(" ", name, "=", p.to_text(sys_.varnames), " degree", p.degree())

# Jacobian and Hessians are computed symbolically, once, with exact
# integer coefficients.
print("\ndp/dx =", sys_.jacobian[0][0].to_text(sys_.varnames))
print("dp/dy =", sys_.jacobian[0][1].to_text(sys_.varnames))
print("d2p/dxdy =", sys_.hessians[0][1].to_text(sys_.varnames))

# Exact point evaluation over the rationals, for oracles and tests.
pt = [Fraction(1, 2), Fraction(1, 3)]
print("\np(1/2, 1/3) =", sys_.polys[0].eval_fraction(pt))

# Compilation fixes a working precision: coefficients become interval
# enclosures and the term tree becomes a Horner tape.
cs = sys_.compile(53)
X = IBox.from_bounds([(0, 1), (-1, 1)], 53)
from boxroots import eval_order0
for i, name in enumerate(sys_.names):
    iv = eval_order0(cs, i, X)
    print("range of", name, "over [0,1]x[-1,1]  in ", iv.decimal_bounds())

# A coefficient too wide for the target format stays sound: it turns
# into a one-ulp interval instead of silently rounding, so evaluation
# still encloses the exact value w(1) = 2^60.
big = parse_system("vars t\nw: %d*t - 1" % (2**60 + 1))
c = big.compile(53)
out = eval_order0(c, 0, IBox.from_bounds([(1, 1)], 53))
lo, hi = out.to_fractions()
print("\nw(1) enclosed at 53 bits:", out.hex_bounds(),
      " contains 2^60:", lo <= 2**60 <= hi)
