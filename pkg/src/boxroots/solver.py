"""Branch-and-bound isolation of regular roots with adaptive precision.

A solve explores the subdivision tree of the initial box depth-first.
Each visited box is handled by the first applicable rule:

1. the precision criteria fire: park the box for the next pass at
   doubled precision (on the final pass, where no higher precision
   exists, the Newton-step criterion still parks noise-dominated boxes
   so the walk does not grind through them ulp by ulp; they exit as
   precision-starved output);
2. the box is narrower than the width floor: park it as undetermined;
3. the exclusion test proves it rootless: drop it;
4. the certification test proves a unique interior root: record the
   (epsilon-inflated) box, unless that root was already recorded; a
   certified box touching the domain boundary is replaced by its
   Krawczyk image and revisited, so the contraction either pulls it
   strictly inside the domain or shrinks it under the width floor;
5. otherwise: bisect along the smear direction and recurse.

The outer loop reruns parked boxes at doubled precision until the cap.
Boxes popped in a pass are migrated to the pass precision on the spot
(exact widening).  Certified boxes are kept epsilon-inflated, exactly
as certified.

Certification and exclusion both hold at the precision they were
computed at, so results from different passes mix soundly; duplicate
suppression compares against all solutions recorded so far, whatever
their precision.
"""

import os
import time

from collections import OrderedDict, deque
from fractions import Fraction

from .certify import (SolutionBox, check_no_solution, check_one_solution,
                      is_sol_in_list)
from .enclosure import (BoxCtx, Classification, EvalCounters, STRATEGIES)
from .precisionctl import C2_WIDTH, DEFAULT_EPS_REL, check_prec, t_verdict


class NoAdmissibleDirection(ValueError):
    """All components of the box to bisect are at or under the width
    floor."""


class WorkItem:
    __slots__ = ("box", "inflate_and_bisect")

    def __init__(self, box, inflate_and_bisect):
        self.box = box
        self.inflate_and_bisect = inflate_and_bisect


class UndeterminedBox:
    """A box that may contain roots but was abandoned: `reason` is
    "min_width" (hit the width floor) or "precision" (still parked when
    the precision budget ran out)."""

    __slots__ = ("box", "prec", "reason")

    def __init__(self, box, prec, reason):
        self.box = box
        self.prec = prec
        self.reason = reason

    def __repr__(self):
        return "UndeterminedBox(%r, %s)" % (self.box, self.reason)


def _env_eps_rel():
    raw = os.environ.get("SUBDIV_EPS_REL")
    if raw:
        return Fraction(raw)
    return DEFAULT_EPS_REL


class SolverConfig:
    """Knobs of a solve.

    omega: minimum width of boxes still explored (0 permitted; the
    process is then not guaranteed to terminate).  p0/p_max: initial
    and maximal mantissa bits.  eps_rel: relative epsilon-inflation
    (env SUBDIV_EPS_REL overrides the default 1/16).  strategy: one of
    STRATEGIES.  c2_form: "width" or "subset".  pivot_tol: elimination
    pivot floor override.  record_excluded: keep every box the
    exclusion test discarded (for audits; off by default).
    """

    __slots__ = ("omega", "p0", "p_max", "eps_rel", "strategy", "c2_form",
                 "pivot_tol", "record_excluded")

    def __init__(self, omega=1e-6, p0=53, p_max=113, eps_rel=None,
                 strategy=None, c2_form=C2_WIDTH, pivot_tol=None,
                 record_excluded=False):
        if omega < 0:
            raise ValueError("omega must be non-negative")
        if p0 < 2 or p_max < p0:
            raise ValueError("need 2 <= p0 <= p_max")
        self.omega = omega
        self.p0 = p0
        self.p_max = p_max
        self.eps_rel = _env_eps_rel() if eps_rel is None else Fraction(eps_rel)
        if self.eps_rel < 0:
            raise ValueError("eps_rel must be non-negative")
        self.strategy = STRATEGIES[1] if strategy is None else strategy
        self.c2_form = c2_form
        self.pivot_tol = pivot_tol
        self.record_excluded = record_excluded


class Stats:
    """Counters of one solve.

    Node counts follow the subdivision-tree taxonomy: n1 width-floor
    leaves, n2 excluded leaves (including certified roots that fell
    outside the domain and re-certifications of already recorded
    roots), n3 newly recorded solutions, n4 boundary contractions, n5
    bisections.  Every popped box increments exactly one of these or
    prec_deferred, so boxes_explored = n1+..+n5 + prec_deferred.
    """

    __slots__ = ("boxes_explored", "n1", "n2", "n3", "n4", "n5",
                 "prec_deferred", "c1", "c2", "c3", "counters",
                 "max_precision_used", "precision_passes", "wall_ms")

    def __init__(self):
        self.boxes_explored = 0
        self.n1 = 0
        self.n2 = 0
        self.n3 = 0
        self.n4 = 0
        self.n5 = 0
        self.prec_deferred = 0
        self.c1 = 0
        self.c2 = 0
        self.c3 = 0
        self.counters = EvalCounters()
        self.max_precision_used = 0
        self.precision_passes = []
        self.wall_ms = 0.0

    def identity_holds(self):
        return self.boxes_explored == (self.n1 + self.n2 + self.n3
                                       + self.n4 + self.n5
                                       + self.prec_deferred)

    def as_dict(self):
        return {
            "boxes_explored": self.boxes_explored,
            "node_counts": {"n1": self.n1, "n2": self.n2, "n3": self.n3,
                            "n4": self.n4, "n5": self.n5,
                            "prec_deferred": self.prec_deferred},
            "precision_triggers": {"c1": self.c1, "c2": self.c2,
                                   "c3": self.c3},
            "evals": self.counters.as_dict(),
            "max_precision_used": self.max_precision_used,
            "precision_passes": list(self.precision_passes),
            "wall_ms": self.wall_ms,
        }


class SolveReport:
    """Outcome of a solve: certified solutions, abandoned boxes with
    their reason, the 0/1/2 status, and counters.  status 0 means the
    undetermined list is empty: every interior root is captured."""

    __slots__ = ("solutions", "undetermined", "status", "stats", "config",
                 "excluded")

    def __init__(self, solutions, undetermined, status, stats, config,
                 excluded=None):
        self.solutions = solutions
        self.undetermined = undetermined
        self.status = status
        self.stats = stats
        self.config = config
        self.excluded = excluded

    def __repr__(self):
        return "SolveReport(status=%d, %d solutions, %d undetermined)" % (
            self.status, len(self.solutions), len(self.undetermined))


class _CtxCache:
    """Per-pass box context cache (FIFO-capped).

    Sharing contexts between the precision check, the exclusion and
    certification tests, and the final bisection is what keeps each
    tape set evaluated at most once per box; the halves evaluated by
    the c2 test are the very boxes popped next, so their work carries
    over.
    """

    __slots__ = ("cs", "counters", "pivot_tol", "cap", "_map")

    def __init__(self, cs, counters, pivot_tol, cap=4096):
        self.cs = cs
        self.counters = counters
        self.pivot_tol = pivot_tol
        self.cap = cap
        self._map = OrderedDict()

    def get(self, box):
        key = box.key()
        ctx = self._map.get(key)
        if ctx is None:
            ctx = BoxCtx(self.cs, box, self.counters, self.pivot_tol)
            self._map[key] = ctx
            if len(self._map) > self.cap:
                self._map.popitem(last=False)
        return ctx


def bisect(cs, X, omega, ctx=None):
    """Split X along the maximum smear-diameter direction among the
    components wider than omega (ties to the lowest index; the halves
    share the midpoint).  Raises NoAdmissibleDirection when every
    component is at or under omega."""
    if not any(iv.width() > omega for iv in X.ivs):
        raise NoAdmissibleDirection("all components at or under %r" % omega)
    if ctx is None:
        ctx = BoxCtx(cs, X)
    _, x1, x2 = ctx.smear_split(omega)
    return x1, x2


def solve_fixed_prec(cs, cfg, X0, items, p, stats=None, solutions=None,
                     excluded=None):
    """One depth-first pass at fixed precision p.

    `items` seeds the work list (boxes are migrated to p at pop time).
    `solutions` is the cross-pass solution list used for duplicate
    suppression; newly certified boxes are appended to it.  Returns
    (new_solutions, completed, deferred): boxes certified this pass,
    boxes at the width floor, and work items parked for the next
    precision.
    """
    if stats is None:
        stats = Stats()
    if solutions is None:
        solutions = []
    strat = cfg.strategy
    cache = _CtxCache(cs, stats.counters, cfg.pivot_tol)
    work = deque()
    for it in items:
        work.append(WorkItem(it.box, it.inflate_and_bisect))
    new_sols = []
    completed = []
    deferred = []
    while work:
        item = work.popleft()
        X = item.box
        if X.prec != p:
            X = X.change_precision(p)
        flag = item.inflate_and_bisect
        stats.boxes_explored += 1

        verdict = check_prec(cs, X, cfg.omega, p, cfg.p_max, flag,
                             strategy=strat, c2_form=cfg.c2_form,
                             eps_rel=cfg.eps_rel, ctx_factory=cache.get)
        if not verdict.escalate and p >= cfg.p_max \
                and X.width() > cfg.omega:
            # Stall guard for the final pass.  check_prec mutes the
            # Newton-step criterion at the precision cap, but without it
            # a box whose evaluation is pure rounding noise (clustered
            # coefficients wider than the mantissa) is bisected down to
            # single ulps, one leaf per representable point: the noise
            # band around such a cluster holds ~2^(p/2) of them.  Probe
            # the criterion anyway and park stalled boxes; they surface
            # as precision-starved output when the loop exits.  Boxes at
            # the width floor are exempt: they complete below instead of
            # bisecting (a point box would trip the probe forever).
            verdict = t_verdict(cache.get(X.inflate(cfg.eps_rel)
                                          if flag else X))
        if verdict.escalate:
            if verdict.trigger == "c1":
                stats.c1 += 1
            elif verdict.trigger == "c2":
                stats.c2 += 1
            else:
                stats.c3 += 1
            stats.prec_deferred += 1
            deferred.append(WorkItem(X, flag))
            continue

        if X.width() <= cfg.omega:
            stats.n1 += 1
            completed.append(X)
            continue

        xe = X.inflate(cfg.eps_rel) if flag else X
        ctx_e = cache.get(xe)

        if check_no_solution(cs, strat, xe, ctx_e):
            stats.n2 += 1
            if excluded is not None:
                excluded.append(xe)
            continue

        if check_one_solution(cs, strat, xe, ctx_e):
            image = ctx_e.krawczyk(strat.kvariant).image
            if xe.meets_boundary_of(X0):
                stats.n4 += 1
                work.appendleft(WorkItem(image, False))
            elif xe.subset_of_interior(X0):
                if is_sol_in_list(xe, solutions):
                    # root already recorded by an overlapping box
                    stats.n2 += 1
                else:
                    stats.n3 += 1
                    sol = SolutionBox(xe, p, image)
                    solutions.append(sol)
                    new_sols.append(sol)
            elif image.intersects(X0):
                # inflation pushed the box fully outside the domain but
                # the contraction still reaches back in: re-enter
                stats.n4 += 1
                work.appendleft(WorkItem(image, False))
            else:
                stats.n2 += 1
            continue

        _, x1, x2 = cache.get(X).smear_split(cfg.omega)
        stats.n5 += 1
        work.appendleft(WorkItem(x1, True))
        work.appendleft(WorkItem(x2, True))
    return new_sols, completed, deferred


def _next_precision(p, p_max):
    # doubling schedule, clamped to land exactly on p_max
    if 2 * p < p_max or p == p_max:
        return 2 * p
    return p_max


def solve_adaptive(system, cfg, X0):
    """Full adaptive solve of `system` over X0 (at cfg.p0 bits).

    Runs fixed-precision passes over the parked list, doubling the
    precision between passes (clamped to p_max), and maps the outcome
    to status r: 0 when nothing was abandoned, 1 when only
    precision-starved boxes remain, 2 when width-floor boxes remain.
    """
    t0 = time.perf_counter()
    stats = Stats()
    solutions = []
    undetermined = []
    excluded = [] if cfg.record_excluded else None
    p = cfg.p0
    parked = [WorkItem(X0, True)]
    any_completed = False
    while parked and p <= cfg.p_max:
        stats.precision_passes.append(p)
        if p > stats.max_precision_used:
            stats.max_precision_used = p
        cs = system.compile(p)
        _, completed, parked = solve_fixed_prec(
            cs, cfg, X0, parked, p, stats, solutions, excluded)
        for box in completed:
            any_completed = True
            undetermined.append(UndeterminedBox(box, p, "min_width"))
        p = _next_precision(p, cfg.p_max)
    for item in parked:
        undetermined.append(UndeterminedBox(item.box, item.box.prec,
                                            "precision"))
    if any_completed:
        status = 2
    elif parked:
        status = 1
    else:
        status = 0
    stats.wall_ms = (time.perf_counter() - t0) * 1000.0
    return SolveReport(solutions, undetermined, status, stats, cfg, excluded)


def refine_solutions(system, report, r_target):
    """Contract every solution box toward width < r_target.

    Iterates X <- K2(X) n X starting at the highest precision the
    solve used, escalating precision (same doubling schedule) whenever
    the contraction reaches a fixpoint that is still too wide, up to
    the solve's precision cap and at most 64 rounds per box.  Returns
    new SolutionBox entries, each still certified; boxes that cannot
    reach r_target come back as narrow as the cap allows.
    """
    from .enclosure import KrawczykVariant
    p_max = report.config.p_max
    pivot_tol = report.config.pivot_tol
    out = []
    for sol in report.solutions:
        p = max(report.stats.max_precision_used, sol.prec)
        box = sol.box if sol.box.prec == p else sol.box.change_precision(p)
        cert_box, cert_p, cert_img = sol.box, sol.prec, sol.krawczyk_image
        for _ in range(64):
            cs = system.compile(p)
            ctx = BoxCtx(cs, box, pivot_tol=pivot_tol)
            outcome = ctx.krawczyk(KrawczykVariant.K_ORDER2)
            if outcome.classification is Classification.STRICTLY_INSIDE:
                cert_box, cert_p, cert_img = box, p, outcome.image
                if box.width() < r_target:
                    break
                nxt = outcome.image.intersection(box)
                if nxt is not None and nxt != box:
                    box = nxt
                    continue
            # no progress at this precision
            if p < p_max:
                p = _next_precision(p, p_max)
                box = box.change_precision(p)
                continue
            break
        out.append(SolutionBox(cert_box, cert_p, cert_img))
    return out
