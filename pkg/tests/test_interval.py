"""Interval endpoint arithmetic: pinned values plus containment sweeps."""

import math
import random
from fractions import Fraction

import pytest

from boxroots.interval import (
    DimensionError,
    DivisionByZeroInterval,
    IBox,
    Interval,
    PrecisionMismatchError,
)


def bounds(iv):
    return iv.to_fractions()


def rand_interval(rng, prec=53, span=8.0):
    a = rng.uniform(-span, span)
    b = rng.uniform(-span, span)
    lo, hi = (a, b) if a <= b else (b, a)
    return Interval.from_bounds(Fraction(lo), Fraction(hi), prec)


# -- arithmetic ---------------------------------------------------------


def test_mul_exact_endpoints():
    a = Interval(0.0, 2.0)
    assert bounds(a * a) == (0, 4)
    b = Interval(-1.0, 1.0)
    assert bounds(b * b) == (-1, 1)


def test_add_outward_rounding_binary64():
    one = Interval(1.0, 1.0)
    tiny = Interval.from_value(Fraction(1, 2**60))
    s = one + tiny
    # 1 + 2^-60 sits strictly between consecutive binary64 values 1 and
    # 1 + 2^-52; the sum must widen to that bracket.
    assert bounds(s) == (1, Fraction(2**52 + 1, 2**52))


def test_add_exact_when_representable():
    assert bounds(Interval(0.5, 1.5) + Interval(0.25, 0.25)) == (
        Fraction(3, 4),
        Fraction(7, 4),
    )


def test_sub_is_add_of_negation():
    rng = random.Random(11)
    for _ in range(200):
        a = rand_interval(rng)
        b = rand_interval(rng)
        d = a - b
        s = a + (-b)
        assert bounds(d) == bounds(s)


def test_pow_uint_even_through_zero():
    x = Interval(-2.0, 3.0)
    assert bounds(x**2) == (0, 9)
    assert bounds(x**3) == (-8, 27)
    assert bounds(x**0) == (1, 1)


def test_div_by_zero_straddling_interval():
    with pytest.raises(DivisionByZeroInterval):
        Interval(1.0, 2.0) / Interval(-1.0, 1.0)
    q = Interval(1.0, 1.0) / Interval(2.0, 4.0)
    assert bounds(q) == (Fraction(1, 4), Fraction(1, 2))


def test_precision_mismatch_rejected():
    with pytest.raises(PrecisionMismatchError):
        Interval(1.0, 2.0, 53) + Interval.from_value(1, 106)


def test_nan_bound_rejected():
    with pytest.raises(ValueError):
        Interval(float("nan"), 1.0)
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)


# -- midpoint -----------------------------------------------------------


def test_mid_halves_unit_interval():
    assert Interval(1.0, 2.0).mid() == 1.5


def test_mid_of_one_ulp_interval_is_lower_bound():
    a = 1.0
    b = math.nextafter(a, math.inf)
    assert Interval(a, b).mid() == a


def test_mid_symmetric_interval_is_zero():
    assert Interval(-1.0, 1.0).mid() == 0.0


def test_mid_always_inside_and_stable():
    rng = random.Random(23)
    for _ in range(500):
        x = rand_interval(rng)
        c = x.mid()
        assert x.lo <= c <= x.hi
        assert x.mid() == c
        assert x.width() == x.width()


# -- box predicates -----------------------------------------------------


def test_subset_of_interior():
    inner = IBox.from_bounds([(1.25, 1.58)])
    outer = IBox.from_bounds([(1, 2)])
    assert inner.subset_of_interior(outer)
    assert not outer.subset_of_interior(inner)
    # shared endpoint is boundary contact, not interior containment
    edge = IBox.from_bounds([(1, 1.5)])
    assert not edge.subset_of_interior(outer)


def test_intersection_empty_is_none():
    a = IBox.from_bounds([(1, 2)])
    b = IBox.from_bounds([(3, 4)])
    assert a.intersection(b) is None
    assert not a.intersects(b)


def test_meets_boundary_shared_endpoint():
    a = IBox.from_bounds([(0, 0.5)])
    b = IBox.from_bounds([(0, 1)])
    assert a.meets_boundary_of(b)
    assert not IBox.from_bounds([(0.25, 0.5)]).meets_boundary_of(b)


def test_dimension_mismatch():
    a = IBox.from_bounds([(0, 1)])
    b = IBox.from_bounds([(0, 1), (0, 1)])
    with pytest.raises(DimensionError):
        a.subset(b)


# -- inflation ----------------------------------------------------------


def test_inflate_width_relative_delta():
    x = Interval(1.0, 2.0).inflate(Fraction(1, 16))
    lo, hi = bounds(x)
    # delta = w/16 = 1/16 on both sides (exactly representable here)
    assert lo == Fraction(15, 16)
    assert hi == Fraction(33, 16)


def test_inflate_point_interval_ulp_floor():
    x = Interval(1.0, 1.0).inflate(Fraction(1, 16))
    assert x.lo == math.nextafter(1.0, -math.inf)
    assert x.hi == math.nextafter(1.0, math.inf)


def test_inflate_strictly_contains():
    rng = random.Random(37)
    for _ in range(1000):
        x = rand_interval(rng)
        y = x.inflate(Fraction(1, 16))
        assert y.lo < x.lo and x.hi < y.hi
    for _ in range(100):
        X = IBox([rand_interval(rng) for _ in range(3)])
        assert X.subset_of_interior(X.inflate(0))


# -- precision migration ------------------------------------------------


def test_change_precision_exact_widening():
    x = Interval(1.0, 2.0).change_precision(106)
    assert x.prec == 106
    assert bounds(x) == (1, 2)


def test_change_precision_narrowing_rounds_outward():
    v = Fraction(2**60 + 1, 2**60)  # 1 + 2^-60
    x = Interval.from_value(v, 106)
    assert bounds(x) == (v, v)  # exact at 106 bits
    y = x.change_precision(53)
    assert bounds(y) == (1, Fraction(2**52 + 1, 2**52))


def test_change_precision_roundtrip_contains():
    rng = random.Random(51)
    for _ in range(1000):
        x = rand_interval(rng, prec=106)
        back = x.change_precision(53).change_precision(106)
        assert back.lo <= x.lo and x.hi <= back.hi


# -- containment soundness ----------------------------------------------


def frac_op(op, a, b):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise AssertionError(op)


def iv_op(op, a, b):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise AssertionError(op)


@pytest.mark.parametrize("prec", [53, 106])
@pytest.mark.parametrize("op", ["add", "sub", "mul", "div"])
def test_op_contains_exact_image(op, prec):
    rng = random.Random(hash((op, prec)) & 0xFFFF)
    done = 0
    while done < 1000:
        a = rand_interval(rng, prec)
        b = rand_interval(rng, prec)
        if op == "div" and b.contains_zero():
            continue
        try:
            r = iv_op(op, a, b)
        except DivisionByZeroInterval:
            continue
        rl, rh = bounds(r)
        al, ah = bounds(a)
        bl, bh = bounds(b)
        for _ in range(20):
            pa = al + Fraction(rng.random()).limit_denominator(10**6) * (ah - al)
            pb = bl + Fraction(rng.random()).limit_denominator(10**6) * (bh - bl)
            exact = frac_op(op, pa, pb)
            assert rl <= exact <= rh
        done += 1


@pytest.mark.parametrize("op", ["add", "sub", "mul"])
def test_op_monotone_under_operand_nesting(op):
    rng = random.Random(hash(op) & 0xFFFF)
    for _ in range(500):
        a = rand_interval(rng)
        b = rand_interval(rng)
        # shrink both operands toward their midpoints
        a2 = Interval.from_bounds(
            Fraction(a.lo) + Fraction(a.width()) / 4,
            Fraction(a.hi) - Fraction(a.width()) / 4,
        )
        b2 = Interval.from_bounds(
            Fraction(b.lo) + Fraction(b.width()) / 4,
            Fraction(b.hi) - Fraction(b.width()) / 4,
        )
        big = iv_op(op, a, b)
        small = iv_op(op, a2, b2)
        assert big.lo <= small.lo and small.hi <= big.hi


# -- serialization ------------------------------------------------------


def test_hex_bounds_are_exact():
    x = Interval(0.1, 0.3)  # stored binary64 values, not decimals
    hl, hh = x.hex_bounds()
    assert float.fromhex(hl) == x.lo
    assert float.fromhex(hh) == x.hi


def test_from_value_accepts_text_forms():
    assert bounds(Interval.from_value("1/4")) == (Fraction(1, 4), Fraction(1, 4))
    assert bounds(Interval.from_value("0.5")) == (Fraction(1, 2), Fraction(1, 2))
    assert bounds(Interval.from_value("0x1.8p+0")) == (
        Fraction(3, 2),
        Fraction(3, 2),
    )
