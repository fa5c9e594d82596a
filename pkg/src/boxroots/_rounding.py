"""Directed-rounding scalar primitives for the two interval backends.

Two families of bound arithmetic live here:

* binary64 (precision 53): plain Python floats.  CPython gives no access to
  the FPU rounding mode, so rounding direction is recovered after the fact
  with error-free transformations (two-sum for +/-, Dekker's two-product
  for *) and a single `nextafter` step when the computed error says the
  rounded result lies on the wrong side.  Exact operations stay exact.
* MPFR (precision > 53): gmpy2 contexts with explicit precision and
  RoundDown / RoundUp.  Contexts are created per precision and cached;
  nothing relies on process-global rounding state.

All functions return a value that is a *guaranteed* bound of the exact
result in the requested direction.  The binary64 division widens by one
ulp when the quotient is inexact instead of resolving the exact side;
that is sound and division never appears on the hot evaluation path.
"""

import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

try:
    # lets the compiled kernel call these exact functions while the scalar
    # path keeps calling them as plain Python, zero overhead either way
    from numba.extending import register_jitable
except ImportError:  # pragma: no cover
    def register_jitable(f):
        return f

DOUBLE_PREC = 53

MAX_FLOAT = 1.7976931348623157e308
MIN_SUBNORMAL = 5e-324
_SPLITTER = 134217729.0  # 2**27 + 1, Dekker split constant
_EFT_HI = 2.0**970  # beyond this the Dekker split can overflow
_EFT_LO = 2.0**-970  # below this product error terms can be inexact


# ---------------------------------------------------------------------------
# binary64 primitives.  These bodies are numba-compilable on purpose: the
# evaluation kernel jits these exact functions, so the scalar path and the
# compiled path round identically bit for bit.
# ---------------------------------------------------------------------------

@register_jitable
def two_sum_err(a, b):
    # Moller-Knuth: exact error of the rounded sum, valid whenever a+b
    # does not overflow.
    s = a + b
    bb = s - a
    return (a - (s - bb)) + (b - bb)


@register_jitable
def two_prod_err(a, b):
    # Dekker: exact error of the rounded product, valid away from the
    # over/underflow bands guarded by the callers.
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    return ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


@register_jitable
def add_down(a, b):
    s = a + b
    if math.isinf(s):
        if s > 0.0 and math.isfinite(a) and math.isfinite(b):
            return MAX_FLOAT
        return s
    if math.isnan(s):
        return s
    if two_sum_err(a, b) < 0.0:
        return math.nextafter(s, -math.inf)
    return s


@register_jitable
def add_up(a, b):
    s = a + b
    if math.isinf(s):
        if s < 0.0 and math.isfinite(a) and math.isfinite(b):
            return -MAX_FLOAT
        return s
    if math.isnan(s):
        return s
    if two_sum_err(a, b) > 0.0:
        return math.nextafter(s, math.inf)
    return s


@register_jitable
def sub_down(a, b):
    return add_down(a, -b)


@register_jitable
def sub_up(a, b):
    return add_up(a, -b)


@register_jitable
def mul_down(a, b):
    p = a * b
    if math.isinf(p):
        if p > 0.0 and math.isfinite(a) and math.isfinite(b):
            return MAX_FLOAT
        return p
    if math.isnan(p):
        return p
    if p == 0.0:
        if a == 0.0 or b == 0.0:
            return 0.0
        if (a > 0.0) == (b > 0.0):
            return 0.0  # tiny positive product rounds down to zero
        return -MIN_SUBNORMAL
    aa = abs(a)
    ab = abs(b)
    if aa > _EFT_HI or ab > _EFT_HI or aa < _EFT_LO or ab < _EFT_LO \
            or abs(p) < _EFT_LO:
        return math.nextafter(p, -math.inf)
    if two_prod_err(a, b) < 0.0:
        return math.nextafter(p, -math.inf)
    return p


@register_jitable
def mul_up(a, b):
    p = a * b
    if math.isinf(p):
        if p < 0.0 and math.isfinite(a) and math.isfinite(b):
            return -MAX_FLOAT
        return p
    if math.isnan(p):
        return p
    if p == 0.0:
        if a == 0.0 or b == 0.0:
            return 0.0
        if (a > 0.0) == (b > 0.0):
            return MIN_SUBNORMAL
        return 0.0  # tiny negative product rounds up to zero
    aa = abs(a)
    ab = abs(b)
    if aa > _EFT_HI or ab > _EFT_HI or aa < _EFT_LO or ab < _EFT_LO \
            or abs(p) < _EFT_LO:
        return math.nextafter(p, math.inf)
    if two_prod_err(a, b) > 0.0:
        return math.nextafter(p, math.inf)
    return p


@register_jitable
def div_down(a, b):
    q = a / b
    if math.isinf(q):
        if q > 0.0 and math.isfinite(a) and math.isfinite(b):
            return MAX_FLOAT
        return q
    if math.isnan(q):
        return q
    if q == 0.0:
        if a == 0.0:
            return 0.0
        if (a > 0.0) == (b > 0.0):
            return 0.0
        return -MIN_SUBNORMAL
    aq = abs(q)
    ab = abs(b)
    if aq > _EFT_HI or ab > _EFT_HI or aq < _EFT_LO or ab < _EFT_LO \
            or abs(a) < _EFT_LO:
        return math.nextafter(q, -math.inf)
    if q * b == a and two_prod_err(q, b) == 0.0:
        return q  # quotient is exact
    return math.nextafter(q, -math.inf)


@register_jitable
def div_up(a, b):
    q = a / b
    if math.isinf(q):
        if q < 0.0 and math.isfinite(a) and math.isfinite(b):
            return -MAX_FLOAT
        return q
    if math.isnan(q):
        return q
    if q == 0.0:
        if a == 0.0:
            return 0.0
        if (a > 0.0) == (b > 0.0):
            return MIN_SUBNORMAL
        return 0.0
    aq = abs(q)
    ab = abs(b)
    if aq > _EFT_HI or ab > _EFT_HI or aq < _EFT_LO or ab < _EFT_LO \
            or abs(a) < _EFT_LO:
        return math.nextafter(q, math.inf)
    if q * b == a and two_prod_err(q, b) == 0.0:
        return q
    return math.nextafter(q, math.inf)


@register_jitable
def float_next_down(x):
    return math.nextafter(x, -math.inf)


@register_jitable
def float_next_up(x):
    return math.nextafter(x, math.inf)


# ---------------------------------------------------------------------------
# MPFR backend: one pair of directed contexts per precision.
# ---------------------------------------------------------------------------

class MpfrRounder:
    """Directed arithmetic on mpfr bounds at a fixed precision > 53."""

    __slots__ = ("bits", "ctx_down", "ctx_up", "ctx_near")

    def __init__(self, bits):
        self.bits = bits
        self.ctx_down = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
        self.ctx_up = gmpy2.context(precision=bits, round=gmpy2.RoundUp)
        self.ctx_near = gmpy2.context(precision=bits)

    def add_down(self, a, b):
        return self.ctx_down.add(a, b)

    def add_up(self, a, b):
        return self.ctx_up.add(a, b)

    def sub_down(self, a, b):
        return self.ctx_down.sub(a, b)

    def sub_up(self, a, b):
        return self.ctx_up.sub(a, b)

    def mul_down(self, a, b):
        return self.ctx_down.mul(a, b)

    def mul_up(self, a, b):
        return self.ctx_up.mul(a, b)

    def div_down(self, a, b):
        return self.ctx_down.div(a, b)

    def div_up(self, a, b):
        return self.ctx_up.div(a, b)

    def next_down(self, x):
        with self.ctx_near:
            return gmpy2.next_below(mpfr(x))

    def next_up(self, x):
        with self.ctx_near:
            return gmpy2.next_above(mpfr(x))

    def from_value_down(self, v):
        # v: int, Fraction, float, str or mpfr; exact input, directed output
        if isinstance(v, Fraction):
            v = gmpy2.mpq(v.numerator, v.denominator)
        with self.ctx_down:
            return mpfr(v)

    def from_value_up(self, v):
        if isinstance(v, Fraction):
            v = gmpy2.mpq(v.numerator, v.denominator)
        with self.ctx_up:
            return mpfr(v)


_ROUNDERS = {}


def mpfr_rounder(bits):
    r = _ROUNDERS.get(bits)
    if r is None:
        r = _ROUNDERS.setdefault(bits, MpfrRounder(bits))
    return r


# ---------------------------------------------------------------------------
# Conversions.  Bounds are Python floats at precision 53 and mpfr above.
# ---------------------------------------------------------------------------

def float_from_value_down(v):
    """Largest binary64 <= v, for exact inputs (int, Fraction, float, str)."""
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        v = _fraction_from_str(v)
    if isinstance(v, int):
        v = Fraction(v)
    try:
        f = float(v)
    except OverflowError:
        return MAX_FLOAT if v > 0 else -math.inf
    if math.isinf(f):
        return MAX_FLOAT if f > 0 else f
    if f > v:
        return math.nextafter(f, -math.inf)
    return f


def float_from_value_up(v):
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        v = _fraction_from_str(v)
    if isinstance(v, int):
        v = Fraction(v)
    try:
        f = float(v)
    except OverflowError:
        return math.inf if v > 0 else -MAX_FLOAT
    if math.isinf(f):
        return f if f > 0 else -MAX_FLOAT
    if f < v:
        return math.nextafter(f, math.inf)
    return f


def convert_bound(x, src_bits, dst_bits, direction):
    """Move a bound between precisions; widening is exact, narrowing rounds
    in `direction` (-1 down, +1 up)."""
    if src_bits == dst_bits:
        return x
    if dst_bits == DOUBLE_PREC:
        ctx = gmpy2.context(
            precision=DOUBLE_PREC,
            round=gmpy2.RoundDown if direction < 0 else gmpy2.RoundUp)
        with ctx:
            f = float(mpfr(x))
        # float() re-rounds to nearest outside the binary64 normal range
        # (mpfr keeps 53 bits where binary64 goes subnormal), so correct
        # against the exact source value.
        if direction < 0 and f > x:
            f = math.nextafter(f, -math.inf)
        elif direction > 0 and f < x:
            f = math.nextafter(f, math.inf)
        return f
    r = mpfr_rounder(dst_bits)
    return r.from_value_down(x) if direction < 0 else r.from_value_up(x)


def bound_to_fraction(x):
    """Exact rational value of a float or mpfr bound (must be finite)."""
    if isinstance(x, float):
        return Fraction(x)
    m, e = x.as_mantissa_exp()
    return Fraction(int(m), 1) * Fraction(2) ** int(e)


# ---------------------------------------------------------------------------
# Bound text forms: exact hexadecimal significand plus a decimal
# approximation for humans; parsing accepts decimal, rational a/b and
# hexfloat strings.
# ---------------------------------------------------------------------------

def bound_hex(x):
    if isinstance(x, float):
        if math.isinf(x) or math.isnan(x):
            return repr(x)
        return x.hex()
    if not gmpy2.is_finite(x):
        return repr(float(x))
    return format(x, "a")


def bound_decimal(x, bits):
    if isinstance(x, float):
        return repr(x)
    digits = int(math.ceil(bits * 0.30103)) + 2
    return format(x, ".{}g".format(digits))


def _fraction_from_str(s):
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num.strip()), int(den.strip()))
    low = s.lower()
    if "0x" in low:
        return _fraction_from_hex(s)
    from decimal import Decimal
    return Fraction(Decimal(s))


def _fraction_from_hex(s):
    s = s.strip().lower()
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    if not s.startswith("0x"):
        raise ValueError("not a hexfloat: %r" % s)
    body = s[2:]
    if "p" in body:
        mant, exp = body.split("p", 1)
        exp = int(exp)
    else:
        mant, exp = body, 0
    if "." in mant:
        whole, frac = mant.split(".", 1)
    else:
        whole, frac = mant, ""
    digits = (whole + frac) or "0"
    value = Fraction(int(digits, 16), 16 ** len(frac))
    return sign * value * Fraction(2) ** exp


def parse_bound_fraction(s):
    """Parse a bound string (decimal, rational a/b, or hexfloat) exactly."""
    return _fraction_from_str(s)
