"""Precision-escalation criteria for the adaptive solver.

Working precision is raised when finite arithmetic stops making
progress on a box:

* c1 -- the bisection produced a half as wide as its parent in the cut
  direction: the parent has no representable interior point there.
* c2 -- a half's range enclosure is as wide as the parent's in every
  component (width form, default), or the parent's enclosure is
  contained in the hull of the halves' (subset form): subdividing no
  longer tightens the evaluation, so rounding dominates it.
* c3 -- the interval Newton step s = C * F(P) at the box midpoint is
  as wide as the box while the projected point P - s still meets the
  box: certification is hopeless at this precision, yet the step lands
  close enough that the box plausibly holds a root.  Checked only
  below the precision cap; a singular preconditioner never triggers.

c1 and c2 are judged on the epsilon-inflated box and halves, c3 on the
inflated box, all orchestrated by :func:`check_prec`.  The c2 width
form is the default because the subset form (printed in its source as
a set inclusion) degenerates on exactly representable components --
e.g. any linear polynomial with small integer coefficients reproduces
the parent enclosure from the halves exactly, which would escalate
every box and leave nothing decidable at any precision.
"""

from fractions import Fraction

from .enclosure import BoxCtx, ExtensionOrder, STRATEGIES

DEFAULT_EPS_REL = Fraction(1, 16)

C2_WIDTH = "width"
C2_SUBSET = "subset"


class PrecisionVerdict:
    __slots__ = ("escalate", "trigger")

    def __init__(self, escalate, trigger=None):
        if escalate != (trigger is not None):
            raise ValueError("trigger tag must accompany escalation")
        self.escalate = escalate
        self.trigger = trigger

    def __bool__(self):
        return self.escalate

    def __repr__(self):
        return "PrecisionVerdict(%r, %r)" % (self.escalate, self.trigger)


_NO_TRIGGER = PrecisionVerdict(False)


def ud_verdict(ctx, ctx1, ctx2, order, c2_form=C2_WIDTH, cut_dir=None):
    """c1/c2 verdict for a bisection of ctx.box into ctx1/ctx2 boxes."""
    if cut_dir is None:
        cut_dir = _infer_cut_dir(ctx.box, ctx1.box)
    w = ctx.box.ivs[cut_dir].width()
    if ctx1.box.ivs[cut_dir].width() >= w \
            or ctx2.box.ivs[cut_dir].width() >= w:
        return PrecisionVerdict(True, "c1")
    ext = ctx.extension(order)
    ext1 = ctx1.extension(order)
    ext2 = ctx2.extension(order)
    if c2_form == C2_WIDTH:
        # a half triggers only when it improves in no component: any
        # component insensitive to the cut direction keeps its parent
        # width, so a per-component test would fire on every bisection
        # of a decoupled system
        widths = [v.width() for v in ext]
        for child in (ext1, ext2):
            if all(child[i].width() >= widths[i] for i in range(len(ext))):
                return PrecisionVerdict(True, "c2")
    elif c2_form == C2_SUBSET:
        if all(ext[i].subset(ext1[i].hull(ext2[i]))
               for i in range(len(ext))):
            return PrecisionVerdict(True, "c2")
    else:
        raise ValueError("unknown c2 form %r" % (c2_form,))
    return _NO_TRIGGER


def t_verdict(ctx):
    """c3 verdict for a single box (no precision gate applied here)."""
    s = ctx.center_step()
    if s is None:
        return _NO_TRIGGER
    w_step = max(v.width() for v in s)
    if not w_step >= ctx.box.width():
        return _NO_TRIGGER
    p = ctx.mid_box()
    for i in range(ctx.m):
        if not (p.ivs[i] - s[i]).intersects(ctx.box.ivs[i]):
            return _NO_TRIGGER
    return PrecisionVerdict(True, "c3")


def check_prec(cs, X, omega, p, p_max, inflate_and_bisect, strategy=None,
               c2_form=C2_WIDTH, eps_rel=DEFAULT_EPS_REL, ctx_factory=None,
               pivot_tol=None):
    """Decide whether X needs a higher working precision.

    With `inflate_and_bisect` the box is split along the smear
    direction, the box and both halves are epsilon-inflated, and the
    c1/c2 tests run on that trio, with c3 consulted afterwards; without
    it only c3 runs on X as is.  c3 is gated off at p = p_max either
    way.  `ctx_factory` lets the caller share evaluation caches; the
    default builds throwaway contexts.
    """
    if strategy is None:
        strategy = STRATEGIES[1]
    if ctx_factory is None:
        def ctx_factory(box):
            return BoxCtx(cs, box, pivot_tol=pivot_tol)
    if inflate_and_bisect:
        cut, x1, x2 = ctx_factory(X).smear_split(omega)
        xe = X.inflate(eps_rel)
        ctx_e = ctx_factory(xe)
        verdict = ud_verdict(ctx_e,
                             ctx_factory(x1.inflate(eps_rel)),
                             ctx_factory(x2.inflate(eps_rel)),
                             strategy.range_order, c2_form, cut)
        if verdict.escalate:
            return verdict
        if p < p_max:
            return t_verdict(ctx_e)
        return _NO_TRIGGER
    if p < p_max:
        return t_verdict(ctx_factory(X))
    return _NO_TRIGGER


def check_prec_ud(cs, X, X1, X2, order=ExtensionOrder.ORDER0,
                  c2_form=C2_WIDTH, cut_dir=None):
    """Standalone c1/c2 check on an explicit bisection (no inflation)."""
    return ud_verdict(BoxCtx(cs, X), BoxCtx(cs, X1), BoxCtx(cs, X2),
                      order, c2_form, cut_dir)


def check_prec_t(cs, X, pivot_tol=None):
    """Standalone c3 check on a single box (no precision gate)."""
    return t_verdict(BoxCtx(cs, X, pivot_tol=pivot_tol))


def _infer_cut_dir(parent, half):
    for i, (a, b) in enumerate(zip(parent.ivs, half.ivs)):
        if a.lo != b.lo or a.hi != b.hi:
            return i
    return 0
