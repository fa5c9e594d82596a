"""End-to-end acceptance checks: isolation, soundness, precision policy."""

import math
import random
import time
from fractions import Fraction

import gmpy2
import numpy as np

from boxroots import (
    IBox,
    STRATEGIES,
    SolverConfig,
    bench,
    parse_system,
    random_system,
    refine_solutions,
    solve_adaptive,
)
from boxroots.bench import median_cells
from boxroots.interval import Interval

CLUSTER = "vars x\np: %d*x^2 - %d*x + %d" % (
    2**120,
    2**121 + 2**60,
    2**120 + 2**60,
)  # (2^60 x - 2^60)(2^60 x - 2^60 - 1): roots 1 and 1 + 2^-60

WIDE_CLUSTER = "vars x\np: %d*x^2 - %d*x + %d" % (
    2**240,
    2**241 + 2**120,
    2**240 + 2**120,
)  # same shape with a 121-bit coefficient spread: noisy even at 113 bits


def sqrt_bracket(n, digits=200):
    """Fraction bracket of sqrt(n), tight to 10^-digits."""
    scale = 10**digits
    r = math.isqrt(n * scale * scale)
    return Fraction(r, scale), Fraction(r + 1, scale)


SQRT2_LO, SQRT2_HI = sqrt_bracket(2)


def box_holds(box, point):
    for iv, q in zip(box.ivs, point):
        lo, hi = iv.to_fractions()
        if not (lo <= q <= hi):
            return False
    return True


def solve(text, bounds, **cfg_kw):
    sys_ = parse_system(text)
    cfg = SolverConfig(**cfg_kw)
    X0 = IBox.from_bounds(bounds, cfg.p0)
    return solve_adaptive(sys_, cfg, X0), sys_


# -- root oracle for random 2-D systems ---------------------------------------


def grid_candidates(sys_, n=240, span=1.0):
    """Cells of an n x n grid over [-span, span]^2 where both components
    change sign.  Float arithmetic: good enough to seed Newton."""
    xs = np.linspace(-span, span, n + 1)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    vals = []
    for p in sys_.polys:
        acc = np.zeros_like(X)
        for (ex, ey), c in p.terms.items():
            acc += float(c) * X**ex * Y**ey
        vals.append(acc)
    cells = []
    for v in vals:
        sgn = np.sign(v)
        change = np.zeros((n, n), dtype=bool)
        corner = sgn[:-1, :-1]
        for block in (sgn[1:, :-1], sgn[:-1, 1:], sgn[1:, 1:]):
            change |= corner * block <= 0
        cells.append(change)
    both = cells[0] & cells[1]
    idx = np.argwhere(both)
    return [((xs[i] + xs[i + 1]) / 2, (xs[j] + xs[j + 1]) / 2) for i, j in idx]


def mpfr_to_fraction(x):
    m, e = x.as_mantissa_exp()
    return Fraction(int(m)) * Fraction(2) ** int(e)


def newton_polish(sys_, x0, y0, bits=300, iters=80):
    """High-precision Newton from a float seed; Fraction root or None."""
    p, q = sys_.polys
    px, py = p.diff(0), p.diff(1)
    qx, qy = q.diff(0), q.diff(1)

    def ev(poly, x, y):
        acc = gmpy2.mpfr(0)
        for (ex, ey), c in poly.terms.items():
            acc += gmpy2.mpfr(c) * x**ex * y**ey
        return acc

    with gmpy2.context(precision=bits):
        x, y = gmpy2.mpfr(x0), gmpy2.mpfr(y0)
        for _ in range(iters):
            f1, f2 = ev(p, x, y), ev(q, x, y)
            a, b = ev(px, x, y), ev(py, x, y)
            c, d = ev(qx, x, y), ev(qy, x, y)
            det = a * d - b * c
            if det == 0:
                return None
            dx = (f1 * d - f2 * b) / det
            dy = (a * f2 - c * f1) / det
            x, y = x - dx, y - dy
            if abs(dx) < 2 ** Fraction(-bits + 40) and abs(dy) < 2 ** Fraction(
                -bits + 40
            ):
                break
        pt = (mpfr_to_fraction(x), mpfr_to_fraction(y))
    # exact residual check: both components vanish to far below any
    # excluded-box certificate tolerance
    scale = max(sum(abs(c) for c in poly.terms.values()) for poly in sys_.polys)
    tol = Fraction(scale) * Fraction(1, 2 ** (bits - 80))
    for poly in sys_.polys:
        if abs(poly.eval_fraction(list(pt))) > tol:
            return None
    return pt


def oracle_roots(sys_, span=1.0):
    roots = []
    for seed in grid_candidates(sys_, span=span):
        pt = newton_polish(sys_, *seed)
        if pt is None:
            continue
        if not all(-span <= q <= span for q in pt):
            continue
        if any(
            abs(pt[0] - r[0]) < Fraction(1, 2**60)
            and abs(pt[1] - r[1]) < Fraction(1, 2**60)
            for r in roots
        ):
            continue
        roots.append(pt)
    return roots


# -- acceptance ----------------------------------------------------------------


def test_01_circle_line_isolation():
    t0 = time.perf_counter()
    rep, _ = solve(
        "vars x y\np: x^2 + y^2 - 1\nq: x - y",
        [(-2, 2), (-2, 2)],
        omega=1e-6,
        p_max=113,
    )
    elapsed = time.perf_counter() - t0
    assert rep.status == 0
    assert len(rep.solutions) == 2
    half_lo, half_hi = SQRT2_LO / 2, SQRT2_HI / 2
    expected = [(half_lo, half_hi), (-half_hi, -half_lo)]
    for want_lo, want_hi in expected:
        hits = [
            s
            for s in rep.solutions
            if box_holds(s.box, (want_lo, want_lo)) and box_holds(s.box, (want_hi, want_hi))
        ]
        assert len(hits) == 1
    assert elapsed < 5.0


def test_02_exclusion_soundness_sweep():
    rng = random.Random(42)
    violations = 0
    checked_roots = 0
    for k in range(20):
        d = 2 + k % 5  # degrees 2..6
        sys_ = random_system(2, d, 4, seed=rng.randrange(1, 10**6))
        roots = oracle_roots(sys_)
        checked_roots += len(roots)
        cfg = SolverConfig(omega=1e-3, record_excluded=True)
        rep = solve_adaptive(
            sys_, cfg, IBox.from_bounds([(-1, 1), (-1, 1)], cfg.p0)
        )
        for X in rep.excluded:
            for root in roots:
                if box_holds(X, root):
                    violations += 1
    assert checked_roots > 0  # the sweep actually exercised roots
    assert violations == 0


def test_03_decoupled_products_capture_every_root():
    rng = random.Random(77)
    pool = [
        Fraction(n, 2**k)
        for k in (1, 2, 3, 4)
        for n in range(-(2**k) + 1, 2**k, 2)
    ]  # odd-numerator dyadics in (-1, 1)
    for trial in range(10):
        m = 1 + trial % 3
        varnames = ["x%d" % (i + 1) for i in range(m)]
        lines = ["vars " + " ".join(varnames)]
        per_var_roots = []
        for i in range(m):
            roots = rng.sample(pool, 2 + rng.randrange(2))  # 2-3 distinct roots
            per_var_roots.append(roots)
            # product of (2^k x - n) factors: integer coefficients
            poly = {(0,) * m: 1}
            for r in roots:
                factor = {
                    tuple(1 if j == i else 0 for j in range(m)): r.denominator,
                    (0,) * m: -r.numerator,
                }
                new = {}
                for e1, c1 in poly.items():
                    for e2, c2 in factor.items():
                        e = tuple(a + b for a, b in zip(e1, e2))
                        new[e] = new.get(e, 0) + c1 * c2
                poly = {e: c for e, c in new.items() if c}
            terms = " + ".join(
                "%d*%s" % (c, "*".join("%s^%d" % (v, e) for v, e in zip(varnames, es) if e) or "1")
                for es, c in sorted(poly.items())
            ).replace("+ -", "- ")
            lines.append("p%d: %s" % (i + 1, terms))
        sys_ = parse_system("\n".join(lines))
        cfg = SolverConfig()
        rep = solve_adaptive(sys_, cfg, IBox.from_bounds([(-1, 1)] * m, cfg.p0))
        true_roots = [()]
        for roots in per_var_roots:
            true_roots = [t + (r,) for t in true_roots for r in roots]
        assert rep.status == 0
        assert not rep.undetermined
        assert len(rep.solutions) == len(true_roots)
        for root in true_roots:
            hits = [s for s in rep.solutions if box_holds(s.box, root)]
            assert len(hits) == 1
        boxes = [s.box for s in rep.solutions]
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                assert boxes[i].intersection(boxes[j]) is None


def test_04_boundary_root_stops_at_width_floor():
    t0 = time.perf_counter()
    rep, _ = solve(
        "vars x y\np: x - 1\nq: 2*y - 1",
        [(0, 1), (0, 1)],
    )
    elapsed = time.perf_counter() - t0
    assert rep.status == 2
    assert not rep.solutions
    assert rep.undetermined
    # the unresolved boxes hug the boundary root (1, 1/2)
    near = [
        u
        for u in rep.undetermined
        if u.box.ivs[0].hi >= 1 - 1e-4 and abs(u.box.ivs[1].mid() - 0.5) < 1e-3
    ]
    assert near
    assert elapsed < 5.0


def test_05_cluster_precision_escalation():
    t0 = time.perf_counter()
    rep, _ = solve(CLUSTER, [(0, 2)], omega=0.0, p_max=256)
    assert rep.status == 0
    assert len(rep.solutions) == 2
    lo_root = Fraction(1)
    hi_root = 1 + Fraction(1, 2**60)
    boxes = sorted(rep.solutions, key=lambda s: s.box.ivs[0].lo)
    assert box_holds(boxes[0].box, (lo_root,)) and not box_holds(
        boxes[0].box, (hi_root,)
    )
    assert box_holds(boxes[1].box, (hi_root,)) and not box_holds(
        boxes[1].box, (lo_root,)
    )
    assert rep.stats.max_precision_used > 53
    assert rep.stats.c3 >= 1
    assert time.perf_counter() - t0 < 10.0

    t0 = time.perf_counter()
    rep, _ = solve(CLUSTER, [(0, 2)], omega=0.0, p_max=53)
    assert rep.status in (1, 2)
    assert rep.undetermined
    assert time.perf_counter() - t0 < 10.0


def test_06_strategy_ordering_on_random_instances():
    t0 = time.perf_counter()
    seeds = (1, 2, 3, 4, 5)
    for m, d in ((2, 16), (3, 8)):
        rows = bench(m, d, strategies=(1, 2, 3, 4), seeds=seeds)
        med = median_cells(rows)
        n = [med[(m, d, sid)][0] for sid in (1, 2, 3, 4)]
        assert n[0] <= n[1] <= n[2] <= n[3], (m, d, n)
        assert n[0] <= 0.8 * n[3], (m, d, n)
    assert time.perf_counter() - t0 < 600.0


def test_07_second_order_contractor_reuses_hessians():
    sys_ = random_system(2, 16, 8, seed=1)
    evals = {}
    shared = {}
    for sid in (1, 2):
        cfg = SolverConfig(strategy=STRATEGIES[sid])
        rep = solve_adaptive(
            sys_, cfg, IBox.from_bounds([(-1, 1), (-1, 1)], cfg.p0)
        )
        evals[sid] = rep.stats.counters.evals_h
        shared[sid] = rep.stats.counters.shared_h
    assert evals[1] <= evals[2] + shared[1]


def test_08_precision_pass_schedule_is_doubling_then_cap():
    rep, _ = solve(WIDE_CLUSTER, [(0, 2)], omega=0.0, p0=53, p_max=113)
    assert rep.stats.precision_passes == [53, 106, 113]
    assert rep.stats.max_precision_used == 113


def test_09_soundness_property_suite():
    rng = random.Random(90901)

    # interval containment: 1000 random multiply/add/subtract/divide
    # applications, each checked on random rational points inside
    def rand_iv():
        a = Fraction(rng.randrange(-8000, 8000), 1000)
        w = Fraction(rng.randrange(1, 4000), 1000)
        return Interval.from_bounds(a, a + w, 53)

    ops = {
        "add": (lambda a, b: a + b, lambda a, b: a + b),
        "sub": (lambda a, b: a - b, lambda a, b: a - b),
        "mul": (lambda a, b: a * b, lambda a, b: a * b),
    }
    for _ in range(1000):
        name = ("add", "sub", "mul")[rng.randrange(3)]
        ivop, exop = ops[name]
        a, b = rand_iv(), rand_iv()
        out = ivop(a, b)
        olo, ohi = out.to_fractions()
        alo, ahi = a.to_fractions()
        blo, bhi = b.to_fractions()
        pa = alo + Fraction(rng.randrange(0, 1001), 1000) * (ahi - alo)
        pb = blo + Fraction(rng.randrange(0, 1001), 1000) * (bhi - blo)
        assert olo <= exop(pa, pb) <= ohi

    # order-0 inclusion monotonicity: 500 nested box pairs
    from boxroots import eval_order0

    sys_ = parse_system("vars x y\np: 3*x^2*y - 2*y^3 + x - 1\nq: x*y - 2")
    cs = sys_.compile(53)
    for _ in range(500):
        lo1 = Fraction(rng.randrange(-3000, 3000), 1000)
        w1 = Fraction(rng.randrange(10, 2000), 1000)
        lo2 = Fraction(rng.randrange(-3000, 3000), 1000)
        w2 = Fraction(rng.randrange(10, 2000), 1000)
        outer = IBox.from_bounds([(lo1, lo1 + w1), (lo2, lo2 + w2)], 53)
        inner = IBox.from_bounds(
            [(lo1 + w1 / 4, lo1 + w1 - w1 / 4), (lo2 + w2 / 4, lo2 + w2 - w2 / 4)],
            53,
        )
        for i in range(2):
            big = eval_order0(cs, i, outer).to_fractions()
            small = eval_order0(cs, i, inner).to_fractions()
            assert big[0] <= small[0] and small[1] <= big[1]

    # inflate strictness: 1000 boxes
    for _ in range(1000):
        lo = Fraction(rng.randrange(-5000, 5000), 1000)
        w = Fraction(rng.randrange(0, 3000), 1000)
        X = IBox.from_bounds([(lo, lo + w)], 53)
        Y = X.inflate(Fraction(1, 16))
        assert X.subset_of_interior(Y)

    # determinism: three identical solves, bitwise-identical reports
    # (wall time is the one measurement allowed to differ)
    outputs = []
    for _ in range(3):
        rep, _ = solve(
            "vars x y\np: x^2 + y^2 - 1\nq: x - y", [(-2, 2), (-2, 2)]
        )
        d = rep.stats.as_dict()
        d.pop("wall_ms")
        outputs.append(
            (
                rep.status,
                [(s.box.key(), s.prec) for s in rep.solutions],
                [(u.box.key(), u.reason) for u in rep.undetermined],
                d,
            )
        )
    assert outputs[0] == outputs[1] == outputs[2]


def test_10_refinement_reaches_twenty_decimal_digits():
    sys_ = parse_system("vars x\np: x^2 - 2")
    cfg = SolverConfig(p_max=256)
    rep = solve_adaptive(sys_, cfg, IBox.from_bounds([(-2, 2)], cfg.p0))
    refined = refine_solutions(sys_, rep, 1e-20)
    assert len(refined) == 2
    pos = [s for s in refined if s.box.ivs[0].lo > 0]
    assert len(pos) == 1
    box = pos[0].box
    assert box.width() < 1e-20
    lo, hi = box.ivs[0].to_fractions()
    assert lo <= SQRT2_LO and SQRT2_HI <= hi
