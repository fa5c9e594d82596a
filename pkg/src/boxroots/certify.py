"""Certification predicates: exclusion, uniqueness, duplicate detection.

The exclusion test runs its range checks cheapest-first and
short-circuits: a single component whose plain interval evaluation
misses zero settles the box before any derivative is touched.  The
uniqueness test relies on the Krawczyk containment property: an image
strictly inside the box proves existence and uniqueness of a root in
it.  Boxes certified that way and overlapping each other necessarily
hold the same root, which is what the duplicate scan exploits.
"""

from .enclosure import BoxCtx, Classification, ExtensionOrder


class SolutionBox:
    """A certified isolating box: Krawczyk image strictly inside at
    `prec` bits."""

    __slots__ = ("box", "prec", "krawczyk_image")

    def __init__(self, box, prec, krawczyk_image):
        self.box = box
        self.prec = prec
        self.krawczyk_image = krawczyk_image

    def __repr__(self):
        return "SolutionBox(%r, prec=%d)" % (self.box, self.prec)


def check_no_solution(cs, strategy, X, ctx=None):
    """True only if the system provably has no root in X.

    Tests, in increasing cost: zero outside a component of the plain
    interval evaluation; zero outside a component of the strategy's
    range extension; Krawczyk image disjoint from X.  A singular
    preconditioner cannot exclude.
    """
    if ctx is None:
        ctx = BoxCtx(cs, X)
    for v in ctx.extension(ExtensionOrder.ORDER0):
        if not v.contains_zero():
            return True
    if strategy.range_order is not ExtensionOrder.ORDER0:
        for v in ctx.extension(strategy.range_order):
            if not v.contains_zero():
                return True
    outcome = ctx.krawczyk(strategy.kvariant)
    return outcome.classification is Classification.DISJOINT


def check_one_solution(cs, strategy, X, ctx=None):
    """True only if the system provably has exactly one root in X."""
    if ctx is None:
        ctx = BoxCtx(cs, X)
    outcome = ctx.krawczyk(strategy.kvariant)
    return outcome.classification is Classification.STRICTLY_INSIDE


def is_sol_in_list(X, sols):
    """True iff X overlaps a recorded solution box.  Both X and every
    list member must be certified isolating boxes; overlap then means
    both contain the same root."""
    return any(X.intersects(s.box) for s in sols)
