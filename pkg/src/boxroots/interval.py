"""Precision-tagged interval arithmetic with guaranteed outward rounding.

An :class:`Interval` is a pair of bounds ``lo <= hi``, each exactly
representable at the interval's precision ``prec`` (in bits of mantissa).
``prec == 53`` selects the binary64 backend (bounds are Python floats);
``prec > 53`` selects the MPFR backend (bounds are ``gmpy2.mpfr`` values
normalised to ``prec`` bits).  Every arithmetic operation returns an
interval that encloses the exact real result: lower bounds round down,
upper bounds round up, and operations whose exact result is representable
stay exact.

An :class:`IBox` is a vector of intervals sharing one precision.  Box
intersection is the only operation that can produce the empty set, and it
signals that by returning ``None`` rather than a sentinel interval.
"""

import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from . import _rounding as rnd
from ._rounding import DOUBLE_PREC


class DivisionByZeroInterval(ZeroDivisionError):
    """Raised when an interval divisor contains zero."""


class DimensionError(ValueError):
    """Raised when box dimensions do not match."""


class PrecisionMismatchError(ValueError):
    """Raised when operands of an interval operation carry different
    precisions; callers must migrate explicitly with change_precision."""


def _is_finite(x):
    if isinstance(x, float):
        return math.isfinite(x)
    return bool(gmpy2.is_finite(x))


class Interval:
    """A closed real interval with directed-rounded endpoint arithmetic.

    Parameters
    ----------
    lo, hi : float or mpfr
        Endpoints, already exact at `prec`.  Use the `from_*` constructors
        to build intervals from exact data with outward rounding.
    prec : int
        Mantissa bits; 53 selects the native binary64 backend.
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec=DOUBLE_PREC):
        if lo != lo or hi != hi:
            raise ValueError("NaN interval bound")
        if lo > hi:
            raise ValueError("interval bounds out of order: [%r, %r]" % (lo, hi))
        # Normalise -0.0 and int literals to the backend bound type; the
        # value itself must already be representable at prec.
        if lo == 0:
            lo = 0.0 if prec == DOUBLE_PREC else mpfr(0, precision=prec)
        elif type(lo) is int:
            lo = float(lo) if prec == DOUBLE_PREC else mpfr(lo, precision=prec)
        if hi == 0:
            hi = 0.0 if prec == DOUBLE_PREC else mpfr(0, precision=prec)
        elif type(hi) is int:
            hi = float(hi) if prec == DOUBLE_PREC else mpfr(hi, precision=prec)
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- constructors -------------------------------------------------

    @classmethod
    def from_value(cls, v, prec=DOUBLE_PREC):
        """Tightest interval at `prec` containing the exact value `v`
        (int, Fraction, float, or bound string)."""
        if isinstance(v, str):
            v = rnd.parse_bound_fraction(v)
        if prec == DOUBLE_PREC:
            return cls(rnd.float_from_value_down(v), rnd.float_from_value_up(v), prec)
        r = rnd.mpfr_rounder(prec)
        return cls(r.from_value_down(v), r.from_value_up(v), prec)

    @classmethod
    def from_bounds(cls, lo, hi, prec=DOUBLE_PREC):
        """Interval from exact bound values (each rounded outward if not
        representable at `prec`)."""
        if isinstance(lo, str):
            lo = rnd.parse_bound_fraction(lo)
        if isinstance(hi, str):
            hi = rnd.parse_bound_fraction(hi)
        if prec == DOUBLE_PREC:
            return cls(rnd.float_from_value_down(lo), rnd.float_from_value_up(hi), prec)
        r = rnd.mpfr_rounder(prec)
        return cls(r.from_value_down(lo), r.from_value_up(hi), prec)

    @classmethod
    def point(cls, x, prec=DOUBLE_PREC):
        """Degenerate interval [x, x] for an already-representable bound."""
        return cls(x, x, prec)

    # -- scalar queries ------------------------------------------------

    def width(self):
        """Upper bound of hi - lo, rounded up at this precision."""
        if self.prec == DOUBLE_PREC:
            return rnd.sub_up(self.hi, self.lo)
        return rnd.mpfr_rounder(self.prec).sub_up(self.hi, self.lo)

    def mid(self):
        """A representable point inside the interval: lo + width/2 rounded
        toward lo, so the forced tie at one-ulp intervals lands on lo."""
        if self.lo == self.hi:
            return self.lo
        if not (_is_finite(self.lo) and _is_finite(self.hi)):
            # degenerate after an overflow; pick any finite inside point
            if _is_finite(self.lo):
                return self.lo
            if _is_finite(self.hi):
                return self.hi
            return 0.0 if self.prec == DOUBLE_PREC else mpfr(0, precision=self.prec)
        if self.prec == DOUBLE_PREC:
            w = rnd.sub_up(self.hi, self.lo)
            m = rnd.add_down(self.lo, rnd.mul_down(w, 0.5))
        else:
            r = rnd.mpfr_rounder(self.prec)
            w = r.sub_up(self.hi, self.lo)
            m = r.add_down(self.lo, r.mul_down(w, mpfr(0.5, precision=self.prec)))
        if m < self.lo:
            m = self.lo
        if m > self.hi:
            m = self.hi
        return m

    def mag(self):
        """Magnitude: max(|lo|, |hi|)."""
        return max(abs(self.lo), abs(self.hi))

    def is_point(self):
        return self.lo == self.hi

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def contains(self, v):
        """Exact membership test for an int, Fraction, float or mpfr value."""
        if isinstance(v, (int, float)) or isinstance(v, mpfr):
            return self.lo <= v <= self.hi
        return (rnd.bound_to_fraction(self.lo) <= v
                <= rnd.bound_to_fraction(self.hi))

    def to_fractions(self):
        """Exact rational endpoints (bounds must be finite)."""
        return rnd.bound_to_fraction(self.lo), rnd.bound_to_fraction(self.hi)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Interval):
            raise TypeError("interval operand expected, got %r" % (other,))
        if other.prec != self.prec:
            raise PrecisionMismatchError(
                "mixed precisions %d and %d" % (self.prec, other.prec))
        return other

    def _whole_line(self):
        if self.prec == DOUBLE_PREC:
            return Interval(-math.inf, math.inf, self.prec)
        return Interval(mpfr("-inf"), mpfr("inf"), self.prec)

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.prec)

    def __add__(self, other):
        other = self._check(other)
        if not (_is_finite(self.lo) and _is_finite(self.hi)
                and _is_finite(other.lo) and _is_finite(other.hi)):
            return self._whole_line()
        if self.prec == DOUBLE_PREC:
            return Interval(rnd.add_down(self.lo, other.lo),
                            rnd.add_up(self.hi, other.hi), self.prec)
        r = rnd.mpfr_rounder(self.prec)
        return Interval(r.add_down(self.lo, other.lo),
                        r.add_up(self.hi, other.hi), self.prec)

    def __sub__(self, other):
        other = self._check(other)
        if not (_is_finite(self.lo) and _is_finite(self.hi)
                and _is_finite(other.lo) and _is_finite(other.hi)):
            return self._whole_line()
        if self.prec == DOUBLE_PREC:
            return Interval(rnd.sub_down(self.lo, other.hi),
                            rnd.sub_up(self.hi, other.lo), self.prec)
        r = rnd.mpfr_rounder(self.prec)
        return Interval(r.sub_down(self.lo, other.hi),
                        r.sub_up(self.hi, other.lo), self.prec)

    def __mul__(self, other):
        other = self._check(other)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if not (_is_finite(a) and _is_finite(b) and _is_finite(c)
                and _is_finite(d)):
            return self._whole_line()
        if self.prec == DOUBLE_PREC:
            md, mu = rnd.mul_down, rnd.mul_up
        else:
            r = rnd.mpfr_rounder(self.prec)
            md, mu = r.mul_down, r.mul_up
        lo = min(md(a, c), md(a, d), md(b, c), md(b, d))
        hi = max(mu(a, c), mu(a, d), mu(b, c), mu(b, d))
        return Interval(lo, hi, self.prec)

    def __truediv__(self, other):
        other = self._check(other)
        if other.contains_zero():
            raise DivisionByZeroInterval(
                "divisor interval [%r, %r] contains zero" % (other.lo, other.hi))
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if not (_is_finite(a) and _is_finite(b) and _is_finite(c)
                and _is_finite(d)):
            return self._whole_line()
        if self.prec == DOUBLE_PREC:
            dd, du = rnd.div_down, rnd.div_up
        else:
            r = rnd.mpfr_rounder(self.prec)
            dd, du = r.div_down, r.div_up
        lo = min(dd(a, c), dd(a, d), dd(b, c), dd(b, d))
        hi = max(du(a, c), du(a, d), du(b, c), du(b, d))
        return Interval(lo, hi, self.prec)

    def __pow__(self, n):
        """Range of x**n over the interval for a non-negative integer n
        (sign-aware, tighter than repeated interval multiplication)."""
        if not isinstance(n, int) or n < 0:
            raise ValueError("interval power needs a non-negative integer")
        one = 1.0 if self.prec == DOUBLE_PREC else mpfr(1, precision=self.prec)
        if n == 0:
            return Interval(one, one, self.prec)
        if n == 1:
            return Interval(self.lo, self.hi, self.prec)
        if not (_is_finite(self.lo) and _is_finite(self.hi)):
            return self._whole_line()
        if self.prec == DOUBLE_PREC:
            md, mu = rnd.mul_down, rnd.mul_up
        else:
            r = rnd.mpfr_rounder(self.prec)
            md, mu = r.mul_down, r.mul_up

        def pow_dir(x, k, mul):  # x >= 0
            acc = one
            for _ in range(k):
                acc = mul(acc, x)
            return acc

        a, b = self.lo, self.hi
        if n % 2 == 1 or a >= 0:
            lo = pow_dir(a, n, md) if a >= 0 else -pow_dir(-a, n, mu)
            hi = pow_dir(b, n, mu) if b >= 0 else -pow_dir(-b, n, md)
            return Interval(lo, hi, self.prec)
        if b <= 0:
            return Interval(pow_dir(-b, n, md), pow_dir(-a, n, mu), self.prec)
        zero = one - one
        return Interval(zero, pow_dir(max(-a, b), n, mu), self.prec)

    # -- lattice -------------------------------------------------------

    def intersects(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other):
        """Intersection, or None when the intervals are disjoint."""
        other = self._check(other)
        if not self.intersects(other):
            return None
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi), self.prec)

    def hull(self, other):
        other = self._check(other)
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi), self.prec)

    def subset(self, other):
        return other.lo <= self.lo and self.hi <= other.hi

    def strictly_inside(self, other):
        """True when this interval lies in the topological interior of
        `other` (strict at both endpoints)."""
        return other.lo < self.lo and self.hi < other.hi

    # -- precision -----------------------------------------------------

    def change_precision(self, bits):
        """Migrate to another precision; widening the precision is exact,
        narrowing rounds the bounds outward."""
        if bits == self.prec:
            return self
        lo = rnd.convert_bound(self.lo, self.prec, bits, -1)
        hi = rnd.convert_bound(self.hi, self.prec, bits, +1)
        return Interval(lo, hi, bits)

    def inflate(self, eps_rel):
        """Outward eps-inflation: each bound moves out by
        max(eps_rel * width, one ulp), so the result strictly contains
        this interval at both ends."""
        w = self.width()
        if self.prec == DOUBLE_PREC:
            eps = rnd.float_from_value_up(eps_rel)
            delta = rnd.mul_up(eps, w)
            lo = rnd.sub_down(self.lo, delta)
            hi = rnd.add_up(self.hi, delta)
            if not lo < self.lo:
                lo = rnd.float_next_down(self.lo)
            if not hi > self.hi:
                hi = rnd.float_next_up(self.hi)
        else:
            r = rnd.mpfr_rounder(self.prec)
            eps = r.from_value_up(eps_rel)
            delta = r.mul_up(eps, w)
            lo = r.sub_down(self.lo, delta)
            hi = r.add_up(self.hi, delta)
            if not lo < self.lo:
                lo = r.next_down(self.lo)
            if not hi > self.hi:
                hi = r.next_up(self.hi)
        return Interval(lo, hi, self.prec)

    # -- text ----------------------------------------------------------

    def hex_bounds(self):
        return rnd.bound_hex(self.lo), rnd.bound_hex(self.hi)

    def decimal_bounds(self):
        return (rnd.bound_decimal(self.lo, self.prec),
                rnd.bound_decimal(self.hi, self.prec))

    def __repr__(self):
        lo, hi = self.decimal_bounds()
        return "Interval[%s, %s]@%d" % (lo, hi, self.prec)

    def __eq__(self, other):
        return (isinstance(other, Interval) and self.prec == other.prec
                and self.lo == other.lo and self.hi == other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi, self.prec))


class IBox:
    """A box: vector of intervals sharing one precision."""

    __slots__ = ("ivs",)

    def __init__(self, ivs):
        ivs = tuple(ivs)
        if not ivs:
            raise DimensionError("empty box")
        p = ivs[0].prec
        for iv in ivs:
            if iv.prec != p:
                raise PrecisionMismatchError("box components at mixed precisions")
        self.ivs = ivs

    @classmethod
    def from_bounds(cls, bounds, prec=DOUBLE_PREC):
        """Box from a sequence of (lo, hi) exact values, rounded outward."""
        return cls([Interval.from_bounds(lo, hi, prec) for lo, hi in bounds])

    @property
    def prec(self):
        return self.ivs[0].prec

    @property
    def dim(self):
        return len(self.ivs)

    def __len__(self):
        return len(self.ivs)

    def __getitem__(self, i):
        return self.ivs[i]

    def __iter__(self):
        return iter(self.ivs)

    def width(self):
        """Box width: the maximum component width."""
        return max(iv.width() for iv in self.ivs)

    def mid(self):
        """Componentwise midpoint as a degenerate box (a representable
        point inside the box)."""
        return IBox([Interval.point(iv.mid(), iv.prec) for iv in self.ivs])

    def mid_values(self):
        return tuple(iv.mid() for iv in self.ivs)

    def split(self, i, at):
        """Split component i at the representable point `at`, producing
        the two halves (which share the splitting bound)."""
        iv = self.ivs[i]
        left = Interval(iv.lo, at, iv.prec)
        right = Interval(at, iv.hi, iv.prec)
        a = list(self.ivs)
        b = list(self.ivs)
        a[i] = left
        b[i] = right
        return IBox(a), IBox(b)

    def inflate(self, eps_rel):
        return IBox([iv.inflate(eps_rel) for iv in self.ivs])

    def _check(self, other):
        if len(other.ivs) != len(self.ivs):
            raise DimensionError(
                "box dimensions differ: %d vs %d" % (len(self.ivs), len(other.ivs)))
        return other

    def intersects(self, other):
        other = self._check(other)
        return all(a.intersects(b) for a, b in zip(self.ivs, other.ivs))

    def intersection(self, other):
        """Componentwise intersection, or None when any component pair is
        disjoint (the only source of emptiness)."""
        other = self._check(other)
        out = []
        for a, b in zip(self.ivs, other.ivs):
            c = a.intersection(b)
            if c is None:
                return None
            out.append(c)
        return IBox(out)

    def hull(self, other):
        other = self._check(other)
        return IBox([a.hull(b) for a, b in zip(self.ivs, other.ivs)])

    def subset(self, other):
        other = self._check(other)
        return all(a.subset(b) for a, b in zip(self.ivs, other.ivs))

    def subset_of_interior(self, other):
        other = self._check(other)
        return all(a.strictly_inside(b) for a, b in zip(self.ivs, other.ivs))

    def meets_boundary_of(self, other):
        """True when this box meets the topological boundary of `other`."""
        return self.intersects(other) and not self.subset_of_interior(other)

    def contains_point(self, coords):
        """Exact membership of a point given as Fractions/ints/floats."""
        if len(coords) != len(self.ivs):
            raise DimensionError("point dimension mismatch")
        return all(iv.contains(c) for iv, c in zip(self.ivs, coords))

    def change_precision(self, bits):
        if bits == self.prec:
            return self
        return IBox([iv.change_precision(bits) for iv in self.ivs])

    def key(self):
        """Hashable identity of the box (exact bounds and precision)."""
        return (self.prec,) + tuple((iv.lo, iv.hi) for iv in self.ivs)

    def __eq__(self, other):
        return isinstance(other, IBox) and self.ivs == other.ivs

    def __hash__(self):
        return hash(self.ivs)

    def __repr__(self):
        return "IBox(%s)" % " x ".join(repr(iv) for iv in self.ivs)
