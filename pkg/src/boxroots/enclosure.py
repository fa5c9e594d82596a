"""Range enclosures and Krawczyk contraction for compiled systems.

Three range extensions of increasing tightness-per-cost:

* order 0 -- direct interval Horner evaluation over the box;
* order 1 -- mean value form f(P) + J(X)(X-P) around the midpoint;
* order 2 -- f(P) + J(P)(X-P) + (1/2)(X-P)^t H(X) (X-P).

Two Krawczyk maps share the same point preconditioner C, an approximate
floating inverse of the midpoint Jacobian treated as an exact matrix:

* order 1:  K(X)  = P - C F(P) + (I - C J(X))(X - P)
* order 2:  K2(X) = P - C (F(P) + h),  h_i = (X-P)^t H_i(X) (X-P)

The quadratic terms carry a 1/2 factor in the order-2 range extension
and none in the order-2 Krawczyk map.  An image disjoint from X proves
X has no root; an image strictly inside X proves exactly one.

:class:`BoxCtx` memoizes every evaluation for one (box, precision) pair
so the exclusion tests, the certification test and the precision
criteria never evaluate the same tape set twice; it also meters
evaluation counts, which the benchmark and the reuse accounting rely
on.
"""

import math

from enum import Enum

from .interval import IBox, Interval
from .mpoly import CompiledSystem


class ExtensionOrder(Enum):
    ORDER0 = 0
    ORDER1 = 1
    ORDER2 = 2


class KrawczykVariant(Enum):
    K_ORDER1 = 1
    K_ORDER2 = 2


class Classification(Enum):
    DISJOINT = "disjoint"
    STRICTLY_INSIDE = "strictly_inside"
    INCONCLUSIVE = "inconclusive"
    FAILURE = "failure"


class Strategy:
    """A (range extension, Krawczyk variant) pairing used by the
    exclusion and certification tests."""

    __slots__ = ("id", "range_order", "kvariant")

    def __init__(self, id, range_order, kvariant):
        self.id = id
        self.range_order = range_order
        self.kvariant = kvariant

    def __repr__(self):
        return "Strategy(%d, %s, %s)" % (self.id, self.range_order.name,
                                         self.kvariant.name)


# Cheapest certification work per box comes first in the benchmark's
# ordering claim: strategy 1 pairs the order-2 range extension with the
# order-2 Krawczyk map (sharing one Hessian evaluation), 4 uses plain
# interval evaluation with the classical map.
STRATEGIES = {
    1: Strategy(1, ExtensionOrder.ORDER2, KrawczykVariant.K_ORDER2),
    2: Strategy(2, ExtensionOrder.ORDER2, KrawczykVariant.K_ORDER1),
    3: Strategy(3, ExtensionOrder.ORDER1, KrawczykVariant.K_ORDER1),
    4: Strategy(4, ExtensionOrder.ORDER0, KrawczykVariant.K_ORDER1),
}


class KrawczykOutcome:
    """Result of one Krawczyk application.

    `image` is the full map image (None on failure), `center_step` the
    vector C*F(P) kept for the precision controller, `classification`
    the containment verdict against the input box.
    """

    __slots__ = ("variant", "classification", "image", "center_step",
                 "failure_reason")

    def __init__(self, variant, classification, image, center_step,
                 failure_reason=None):
        self.variant = variant
        self.classification = classification
        self.image = image
        self.center_step = center_step
        self.failure_reason = failure_reason

    def __repr__(self):
        return "KrawczykOutcome(%s, %s)" % (self.variant.name,
                                            self.classification.name)


class EvalCounters:
    """Tape evaluation meters, one unit per polynomial evaluated."""

    __slots__ = ("evals_f", "evals_j", "evals_h", "shared_h")

    def __init__(self):
        self.evals_f = 0
        self.evals_j = 0
        self.evals_h = 0
        self.shared_h = 0

    def as_dict(self):
        return {"f": self.evals_f, "j": self.evals_j, "h": self.evals_h,
                "shared_h": self.shared_h}


def default_pivot_tol(bits):
    # heuristic relative floor for elimination pivots
    return math.pow(2.0, -bits / 2.0)


_UNSET = object()


class BoxCtx:
    """Lazy evaluation cache for one box at one precision.

    Every getter evaluates at most once and feeds the shared counters.
    The Hessian set is the expensive part: the first consumer pays for
    it, later consumers are counted as shared reuses.
    """

    __slots__ = ("cs", "box", "counters", "pivot_tol", "_f0", "_mid",
                 "_fP", "_jP", "_jX", "_hX", "_ext", "_C", "_cstep",
                 "_kout", "_split")

    def __init__(self, cs, box, counters=None, pivot_tol=None):
        if box.prec != cs.bits:
            raise ValueError("box precision %d does not match compiled "
                             "precision %d" % (box.prec, cs.bits))
        self.cs = cs
        self.box = box
        self.counters = counters if counters is not None else EvalCounters()
        self.pivot_tol = pivot_tol if pivot_tol is not None \
            else default_pivot_tol(cs.bits)
        self._f0 = None
        self._mid = None
        self._fP = None
        self._jP = None
        self._jX = None
        self._hX = None
        self._ext = {}
        self._C = _UNSET
        self._cstep = _UNSET
        self._kout = {}
        self._split = None

    # -- raw evaluations --------------------------------------------------

    @property
    def m(self):
        return self.cs.system.m

    def mid_box(self):
        if self._mid is None:
            self._mid = self.box.mid()
        return self._mid

    def f_over_box(self):
        if self._f0 is None:
            sysm = self.cs.system
            pids = [sysm.f_pid(i) for i in range(self.m)]
            self._f0 = self.cs.eval_ids(pids, self.box)
            self.counters.evals_f += self.m
        return self._f0

    def f_at_mid(self):
        if self._fP is None:
            sysm = self.cs.system
            pids = [sysm.f_pid(i) for i in range(self.m)]
            self._fP = self.cs.eval_ids(pids, self.mid_box())
            self.counters.evals_f += self.m
        return self._fP

    def jac_at_mid(self):
        if self._jP is None:
            self._jP = self._eval_jac(self.mid_box())
        return self._jP

    def jac_over_box(self):
        if self._jX is None:
            self._jX = self._eval_jac(self.box)
        return self._jX

    def _eval_jac(self, where):
        m = self.m
        sysm = self.cs.system
        pids = [sysm.jac_pid(i, j) for i in range(m) for j in range(m)]
        flat = self.cs.eval_ids(pids, where)
        self.counters.evals_j += m * m
        return [flat[i * m:(i + 1) * m] for i in range(m)]

    def hessians_over_box(self):
        """All m Hessian matrices over the box, as full symmetric m x m
        interval matrices.  Paid once; later calls count as shared."""
        m = self.m
        cost = m * (m * (m + 1) // 2)
        if self._hX is None:
            sysm = self.cs.system
            pids = [sysm.hess_pid(i, j, k)
                    for i in range(m) for j in range(m) for k in range(j, m)]
            flat = self.cs.eval_ids(pids, self.box)
            self.counters.evals_h += cost
            mats = []
            pos = 0
            for _ in range(m):
                mat = [[None] * m for _ in range(m)]
                for j in range(m):
                    for k in range(j, m):
                        mat[j][k] = flat[pos]
                        mat[k][j] = flat[pos]
                        pos += 1
                mats.append(mat)
            self._hX = mats
        else:
            self.counters.shared_h += cost
        return self._hX

    # -- derived quantities -------------------------------------------------

    def deviation(self):
        """X - P as an interval vector (contains zero by construction)."""
        p = self.mid_box()
        return [x - q for x, q in zip(self.box.ivs, p.ivs)]

    def extension(self, order):
        """The range extension of the requested order over the box."""
        order = ExtensionOrder(order)
        out = self._ext.get(order)
        if out is None:
            if order is ExtensionOrder.ORDER0:
                out = list(self.f_over_box())
            elif order is ExtensionOrder.ORDER1:
                out = self._mean_value_form()
            else:
                out = self._order2_form()
            self._ext[order] = out
        return out

    def _mean_value_form(self):
        fP = self.f_at_mid()
        jX = self.jac_over_box()
        d = self.deviation()
        out = []
        for i in range(self.m):
            acc = fP[i]
            for j in range(self.m):
                acc = acc + jX[i][j] * d[j]
            out.append(acc)
        return out

    def _order2_form(self):
        fP = self.f_at_mid()
        jP = self.jac_at_mid()
        hX = self.hessians_over_box()
        d = self.deviation()
        half = Interval.point(0.5, self.box.prec)
        out = []
        for i in range(self.m):
            acc = fP[i]
            for j in range(self.m):
                acc = acc + jP[i][j] * d[j]
            acc = acc + half * _quadratic_form(hX[i], d)
            out.append(acc)
        return out

    def preconditioner(self):
        """Approximate inverse of the midpoint Jacobian as an exact
        point matrix, or None when elimination meets a tiny pivot."""
        if self._C is _UNSET:
            self._C = _invert_point_matrix(
                [[iv.mid() for iv in row] for row in self.jac_at_mid()],
                self.cs, self.pivot_tol)
        return self._C

    def center_step(self):
        """C * F(P), or None when the preconditioner is singular."""
        if self._cstep is _UNSET:
            C = self.preconditioner()
            if C is None:
                self._cstep = None
            else:
                prec = self.box.prec
                fP = self.f_at_mid()
                self._cstep = [
                    _dot_point_row(C[i], fP, prec) for i in range(self.m)]
        return self._cstep

    def krawczyk(self, variant):
        variant = KrawczykVariant(variant)
        out = self._kout.get(variant)
        if out is None:
            out = self._apply_krawczyk(variant)
            self._kout[variant] = out
        return out

    def smear_split(self, omega):
        """Bisect the box along the maximum smear-diameter direction.

        The cut direction maximizes (max over rows of the Jacobian
        magnitude) times the component width, restricted to components
        wider than omega; ties pick the lowest index.  When no
        component qualifies the widest one is cut anyway, so callers
        probing near-degenerate boxes still get a well-formed split
        (the halves may equal the input).  Returns (direction, X1, X2);
        the halves share the midpoint bound.  Cached per context.
        """
        if self._split is not None and self._split[0] == omega:
            return self._split[1]
        m = self.m
        jX = self.jac_over_box()
        widths = [iv.width() for iv in self.box.ivs]
        best = -1
        best_score = None
        for i in range(m):
            if not widths[i] > omega:
                continue
            colmag = max(float(jX[j][i].mag()) for j in range(m))
            score = colmag * float(widths[i])
            if best_score is None or score > best_score:
                best = i
                best_score = score
        if best < 0:
            best = max(range(m), key=lambda i: (float(widths[i]), -i))
        x1, x2 = self.box.split(best, self.box.ivs[best].mid())
        result = (best, x1, x2)
        self._split = (omega, result)
        return result

    def _apply_krawczyk(self, variant):
        C = self.preconditioner()
        if C is None:
            return KrawczykOutcome(variant, Classification.FAILURE, None,
                                   None, "singular midpoint jacobian")
        prec = self.box.prec
        m = self.m
        s = self.center_step()
        p = self.mid_box().ivs
        d = self.deviation()
        if variant is KrawczykVariant.K_ORDER1:
            jX = self.jac_over_box()
            comps = []
            for i in range(m):
                acc = p[i] - s[i]
                for k in range(m):
                    # (I - C*J(X))[i][k]
                    mik = Interval.point(1.0 if i == k else 0.0, prec)
                    for j in range(m):
                        mik = mik - Interval.point(C[i][j], prec) * jX[j][k]
                    acc = acc + mik * d[k]
                comps.append(acc)
        else:
            hX = self.hessians_over_box()
            fP = self.f_at_mid()
            h = [_quadratic_form(hX[i], d) for i in range(m)]
            fh = [fP[i] + h[i] for i in range(m)]
            comps = [p[i] - _dot_point_row(C[i], fh, prec) for i in range(m)]
        image = IBox(comps)
        if not image.intersects(self.box):
            cls = Classification.DISJOINT
        elif image.subset_of_interior(self.box):
            cls = Classification.STRICTLY_INSIDE
        else:
            cls = Classification.INCONCLUSIVE
        return KrawczykOutcome(variant, cls, image, s)


def _quadratic_form(mat, d):
    """d^t * (mat * d) in that order; mat symmetric but not exploited."""
    m = len(d)
    acc = None
    for j in range(m):
        vj = mat[j][0] * d[0]
        for k in range(1, m):
            vj = vj + mat[j][k] * d[k]
        term = d[j] * vj
        acc = term if acc is None else acc + term
    return acc


def _dot_point_row(crow, vec, prec):
    acc = Interval.point(crow[0], prec) * vec[0]
    for j in range(1, len(vec)):
        acc = acc + Interval.point(crow[j], prec) * vec[j]
    return acc


def _invert_point_matrix(A, cs, rel_tol):
    """Gauss-Jordan inverse with partial pivoting in the compiled
    precision's point arithmetic (rounded to nearest; the result is
    used as an exact preconditioner, so no directed rounding is
    needed).  Returns None when a pivot falls below rel_tol times the
    infinity norm of the row it came from."""
    m = len(A)
    if cs.bits == 53:
        def _finite(v):
            return math.isfinite(v)
        ctx = None
    else:
        import gmpy2
        def _finite(v):
            return gmpy2.is_finite(v)
        ctx = cs.rounder.ctx_near

    for row in A:
        for v in row:
            if not _finite(v):
                return None
    norms = [max(abs(v) for v in row) for row in A]

    def _run():
        aug = [list(A[i]) + [1.0 if i == j else 0.0 for j in range(m)]
               for i in range(m)]
        rnorm = list(norms)
        for col in range(m):
            best = col
            for r in range(col + 1, m):
                if abs(aug[r][col]) > abs(aug[best][col]):
                    best = r
            if best != col:
                aug[col], aug[best] = aug[best], aug[col]
                rnorm[col], rnorm[best] = rnorm[best], rnorm[col]
            piv = aug[col][col]
            if not _finite(piv) or abs(piv) < rel_tol * rnorm[col] \
                    or piv == 0:
                return None
            inv = 1.0 / piv
            row = aug[col]
            for j in range(2 * m):
                row[j] = row[j] * inv
            for r in range(m):
                if r == col:
                    continue
                factor = aug[r][col]
                if factor == 0:
                    continue
                other = aug[r]
                for j in range(2 * m):
                    other[j] = other[j] - factor * row[j]
        C = [row[m:] for row in aug]
        for row in C:
            for v in row:
                if not _finite(v):
                    return None
        return C

    if ctx is None:
        return _run()
    with ctx:
        return _run()


# ---------------------------------------------------------------------------
# Free-standing entry points (each builds a throwaway context).
# ---------------------------------------------------------------------------

def eval_order0(cs, which, X):
    """Natural interval evaluation over X.

    `which` selects the tapes: "F" for the full system vector, an
    integer i for component i, "J" for the Jacobian matrix, or
    ("H", i) for the Hessian matrix of component i.
    """
    sysm = cs.system
    m = sysm.m
    if which == "F":
        return cs.eval_ids([sysm.f_pid(i) for i in range(m)], X)
    if isinstance(which, int):
        return cs.eval_ids([sysm.f_pid(which)], X)[0]
    if which == "J":
        flat = cs.eval_ids(
            [sysm.jac_pid(i, j) for i in range(m) for j in range(m)], X)
        return [flat[i * m:(i + 1) * m] for i in range(m)]
    if isinstance(which, tuple) and len(which) == 2 and which[0] == "H":
        i = which[1]
        flat = cs.eval_ids(
            [sysm.hess_pid(i, j, k) for j in range(m) for k in range(j, m)],
            X)
        mat = [[None] * m for _ in range(m)]
        pos = 0
        for j in range(m):
            for k in range(j, m):
                mat[j][k] = flat[pos]
                mat[k][j] = flat[pos]
                pos += 1
        return mat
    raise ValueError("unrecognized selector %r" % (which,))


def eval_order1(cs, i, X):
    """Mean value form of component i over X."""
    return BoxCtx(cs, X).extension(ExtensionOrder.ORDER1)[i]


def eval_order2(cs, i, X):
    """Order-2 Taylor form of component i over X."""
    return BoxCtx(cs, X).extension(ExtensionOrder.ORDER2)[i]


def krawczyk(cs, variant, X, pivot_tol=None):
    """Apply a Krawczyk variant to X and classify the image."""
    return BoxCtx(cs, X, pivot_tol=pivot_tol).krawczyk(variant)


def midpoint_inverse(cs, P, pivot_tol=None):
    """Preconditioner at a point box P: approximate inverse of the
    midpoint of the interval Jacobian at P, or None if singular."""
    return BoxCtx(cs, P, pivot_tol=pivot_tol).preconditioner()
