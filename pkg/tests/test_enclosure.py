"""Range extensions of orders 0-2 and the Krawczyk contractor."""

import random
from fractions import Fraction

import pytest

from boxroots import IBox, parse_system
from boxroots.enclosure import (
    BoxCtx,
    Classification,
    EvalCounters,
    KrawczykVariant,
    eval_order0,
    eval_order1,
    eval_order2,
    krawczyk,
    midpoint_inverse,
)
from boxroots.mpoly import MPoly

SQRT2 = Fraction(
    665857,
    470832,
)  # Pell convergent, within 2e-12 of the root of x^2-2


def csys(text, prec=53):
    return parse_system(text).compile(prec)


def box(bounds, prec=53):
    return IBox.from_bounds(bounds, prec)


def rand_poly_text(rng, m, deg, nterms, cmax=9):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randrange(0, deg + 1) for _ in range(m))
        c = rng.randrange(-cmax, cmax + 1)
        if c:
            terms[e] = terms.get(e, 0) + c
    terms = {e: c for e, c in terms.items() if c} or {(0,) * m: 1}
    return MPoly(m, terms)


def rand_square_system(rng, m, deg=5, nterms=12, cmax=9):
    varnames = ["x%d" % (i + 1) for i in range(m)]
    lines = ["vars " + " ".join(varnames)]
    polys = [rand_poly_text(rng, m, deg, nterms, cmax) for _ in range(m)]
    for i, p in enumerate(polys):
        lines.append("p%d: %s" % (i + 1, p.to_text(varnames)))
    return parse_system("\n".join(lines))


def rand_box(rng, m, prec=53, span=2.0):
    bs = []
    for _ in range(m):
        a = rng.uniform(-span, span)
        w = rng.uniform(0.01, 1.0)
        bs.append((Fraction(a), Fraction(a) + Fraction(w)))
    return IBox.from_bounds(bs, prec)


def sample_inside(rng, X):
    pt = []
    for iv in X.ivs:
        lo, hi = iv.to_fractions()
        t = Fraction(rng.random()).limit_denominator(10**6)
        pt.append(lo + t * (hi - lo))
    return pt


# -- pinned range extensions ---------------------------------------------


def test_order0_square_via_product_keeps_sign_blowup():
    # x^2 compiled by Horner multiplies two copies of [-1,1]
    cs = csys("vars x\np: x^2")
    out = eval_order0(cs, 0, box([(-1, 1)]))
    assert out.to_fractions() == (-1, 1)


def test_order0_point_and_interval():
    cs = csys("vars x\np: x^2 - 2")
    assert eval_order0(cs, 0, box([(1.5, 1.5)])).to_fractions() == (
        Fraction(1, 4),
        Fraction(1, 4),
    )
    assert eval_order0(cs, 0, box([(3, 4)])).to_fractions() == (7, 14)


def test_order1_centered_form():
    cs = csys("vars x\np: x^2 - 2")
    assert eval_order1(cs, 0, box([(1, 2)])).to_fractions() == (
        Fraction(-7, 4),
        Fraction(9, 4),
    )


def test_order2_centered_form():
    cs = csys("vars x\np: x^2 - 2")
    assert eval_order2(cs, 0, box([(1, 2)])).to_fractions() == (
        Fraction(-3, 2),
        Fraction(2),
    )


def test_order2_pure_square_at_symmetric_box():
    cs = csys("vars x\np: x^2")
    out = eval_order2(cs, 0, box([(-1, 1)]))
    assert out.to_fractions() == (-1, 1)


def test_extensions_collapse_on_point_boxes():
    rng = random.Random(211)
    for _ in range(50):
        sys_ = rand_square_system(rng, 2)
        cs = sys_.compile(53)
        pt = [Fraction(rng.randrange(-8, 9), 4) for _ in range(2)]
        X = IBox.from_bounds([(q, q) for q in pt], 53)
        v0 = eval_order0(cs, 0, X).to_fractions()
        v1 = eval_order1(cs, 0, X).to_fractions()
        v2 = eval_order2(cs, 0, X).to_fractions()
        exact = sys_.polys[0].eval_fraction(pt)
        for lo, hi in (v0, v1, v2):
            assert lo <= exact <= hi


# -- soundness sweeps -----------------------------------------------------


@pytest.mark.parametrize("order", [0, 1, 2])
def test_extension_contains_range_samples(order):
    rng = random.Random(223 + order)
    evalf = {0: eval_order0, 1: eval_order1, 2: eval_order2}[order]
    for _ in range(60):
        m = rng.randrange(1, 4)
        sys_ = rand_square_system(rng, m)
        cs = sys_.compile(53)
        X = rand_box(rng, m)
        for i in range(m):
            lo, hi = evalf(cs, i, X).to_fractions()
            for _ in range(20):
                pt = sample_inside(rng, X)
                exact = sys_.polys[i].eval_fraction(pt)
                assert lo <= exact <= hi


def test_order0_monotone_under_box_nesting():
    rng = random.Random(227)
    for _ in range(500):
        m = rng.randrange(1, 3)
        sys_ = rand_square_system(rng, m, deg=4, nterms=8)
        cs = sys_.compile(53)
        X = rand_box(rng, m)
        inner = []
        for iv in X.ivs:
            lo, hi = iv.to_fractions()
            q = (hi - lo) / 4
            inner.append((lo + q, hi - q))
        Y = IBox.from_bounds(inner, 53)
        for i in range(m):
            big = eval_order0(cs, i, X).to_fractions()
            small = eval_order0(cs, i, Y).to_fractions()
            assert big[0] <= small[0] and small[1] <= big[1]


# -- Krawczyk -------------------------------------------------------------


def test_krawczyk_contracts_sqrt2_bracket():
    cs = csys("vars x\np: x^2 - 2")
    X = box([(1, 2)])
    for variant in (KrawczykVariant.K_ORDER1, KrawczykVariant.K_ORDER2):
        out = krawczyk(cs, variant, X)
        assert out.classification is Classification.STRICTLY_INSIDE
        lo, hi = out.image.ivs[0].to_fractions()
        # exact image endpoints are 5/4 and 19/12, up to outward rounding
        assert abs(lo - Fraction(5, 4)) <= Fraction(1, 2**50)
        assert abs(hi - Fraction(19, 12)) <= Fraction(1, 2**50)
        assert lo <= SQRT2 <= hi


def test_krawczyk_disjoint_when_no_root():
    cs = csys("vars x\np: x^2 - 2")
    out = krawczyk(cs, KrawczykVariant.K_ORDER2, box([(3, 4)]))
    assert out.classification is Classification.DISJOINT


def test_krawczyk_failure_on_singular_midpoint_jacobian():
    cs = csys("vars x\np: x^2")
    out = krawczyk(cs, KrawczykVariant.K_ORDER2, box([(-1, 1)]))
    assert out.classification is Classification.FAILURE
    assert out.image is None


def test_krawczyk_inconclusive_on_two_root_bracket():
    cs = csys("vars x\np: x^2 - 2")
    # [-2, 2] holds both roots; the contractor cannot certify either
    out = krawczyk(cs, KrawczykVariant.K_ORDER2, box([(-2.5, 2)]))
    assert out.classification in (
        Classification.INCONCLUSIVE,
        Classification.FAILURE,
    )


def test_krawczyk_image_keeps_contained_root():
    # soundness: a strictly-inside image still contains the true root
    rng = random.Random(229)
    cs = csys("vars x\np: x^2 - 2")
    X = box([(1, 2)])
    for _ in range(40):
        out = krawczyk(cs, KrawczykVariant.K_ORDER2, X)
        if out.classification is not Classification.STRICTLY_INSIDE:
            break
        lo, hi = out.image.ivs[0].to_fractions()
        assert lo * lo <= 2 <= hi * hi
        X = out.image
    assert X.width() < 1e-6


def test_krawczyk_variants_never_contradict():
    rng = random.Random(233)
    decisive = {Classification.STRICTLY_INSIDE, Classification.DISJOINT}
    for _ in range(200):
        m = rng.randrange(1, 3)
        sys_ = rand_square_system(rng, m, deg=3, nterms=6)
        cs = sys_.compile(53)
        X = rand_box(rng, m, span=1.5)
        a = krawczyk(cs, KrawczykVariant.K_ORDER1, X).classification
        b = krawczyk(cs, KrawczykVariant.K_ORDER2, X).classification
        if a in decisive and b in decisive and a is not b:
            # one certifies a unique root, the other certifies none
            raise AssertionError("contradictory certificates: %s vs %s" % (a, b))


def test_krawczyk_2d_circle_line():
    cs = csys("vars x y\np: x^2 + y^2 - 1\nq: x - y")
    X = box([(0.5, 0.9), (0.5, 0.9)])
    out = krawczyk(cs, KrawczykVariant.K_ORDER2, X)
    assert out.classification is Classification.STRICTLY_INSIDE
    for iv in out.image.ivs:
        lo, hi = iv.to_fractions()
        assert lo <= SQRT2 / 2 <= hi


# -- midpoint inverse ------------------------------------------------------


def test_midpoint_inverse_scalar():
    cs = csys("vars x\np: 3*x")
    inv = midpoint_inverse(cs, box([(-1, 1)]))
    assert abs(inv[0][0] - 1.0 / 3.0) <= 2.0**-52


def test_midpoint_inverse_diagonal_exact():
    cs = csys("vars x y\np: 2*x\nq: 4*y")
    inv = midpoint_inverse(cs, box([(-1, 1), (-1, 1)]))
    assert inv == [[0.5, 0.0], [0.0, 0.25]]


def test_midpoint_inverse_singular_is_none():
    cs = csys("vars x y\np: x + y\nq: x + y")
    assert midpoint_inverse(cs, box([(-1, 1), (-1, 1)])) is None


def test_midpoint_inverse_times_matrix_near_identity():
    rng = random.Random(239)
    for _ in range(50):
        m = rng.randrange(1, 4)
        sys_ = rand_square_system(rng, m, deg=2, nterms=6)
        cs = sys_.compile(53)
        X = rand_box(rng, m)
        ctx = BoxCtx(cs, X)
        A = [
            [iv.mid() for iv in row]
            for row in ctx.jac_at_mid()
        ]
        C = midpoint_inverse(cs, X)
        if C is None:
            continue
        for i in range(m):
            for j in range(m):
                acc = sum(C[i][k] * A[k][j] for k in range(m))
                assert abs(acc - (1.0 if i == j else 0.0)) < 1e-8


# -- evaluation counters ---------------------------------------------------


def test_counters_track_shared_hessian_work():
    cs = csys("vars x\np: x^2 - 2")
    X = box([(1, 2)])
    counters = EvalCounters()
    ctx = BoxCtx(cs, X, counters=counters)
    ctx.extension(2)  # int accepted, coerced to the order-2 member
    h_after_ext = counters.evals_h
    assert counters.evals_f > 0 and h_after_ext > 0
    ctx.krawczyk(KrawczykVariant.K_ORDER2)
    # the order-2 contractor reuses the Hessian evaluation from the
    # order-2 range test on the same box
    assert counters.evals_h == h_after_ext
    assert counters.shared_h > 0
