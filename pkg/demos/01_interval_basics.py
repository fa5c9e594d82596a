"""Intervals carry their precision and always round outward."""

from fractions import Fraction

from boxroots import Interval, IBox

# 0.1 is not a binary64 number, so the enclosing interval is fat by
# one ulp even before any arithmetic happens.
tenth = Interval.from_value(Fraction(1, 10), 53)
print("1/10 at 53 bits:", tenth.hex_bounds())
print("width:", tenth.width())

# Arithmetic rounds the lower bound down and the upper bound up.
a = Interval.from_bounds(1, 2, 53)
b = Interval.from_bounds(Fraction(1, 3), Fraction(1, 2), 53)
print("\n[1,2] * [1/3,1/2] =", (a * b).hex_bounds())
print("[1,2] - [1,2]      =", (a - a).hex_bounds(), " (dependency: not {0})")

# Predicates the solver leans on.
x = Interval.from_bounds(-1, 3, 53)
print("\nmid([-1,3]) =", x.mid(), " width =", x.width())
print("contains 0:", x.contains_zero())
print("[0,1] strictly inside [-1,3]:",
      Interval.from_bounds(0, 1, 53).strictly_inside(x))

# Boxes are just tuples of same-precision intervals.
X = IBox.from_bounds([(0, 1), (Fraction(-1, 2), Fraction(1, 2))], 53)
print("\nbox width:", X.width(), " midpoint:", X.mid_values())
print("inflated by 1/16:", [iv.hex_bounds() for iv in X.inflate(Fraction(1, 16)).ivs])

# Moving to higher precision is exact: the bounds are representable.
wide = X.change_precision(106)
print("after widening to 106 bits:", wide.prec, "bits, same bounds:",
      [iv.to_fractions() == jv.to_fractions() for iv, jv in zip(X.ivs, wide.ivs)])
