"""Sparse multivariate polynomials with exact integer coefficients.

An :class:`MPoly` maps exponent vectors to arbitrary-size integer
coefficients (zero coefficients are never stored).  A
:class:`PolySystem` bundles a square system F = (f_1 .. f_m) over
variables x_1 .. x_m, computes the symbolic Jacobian and all Hessians
once at construction, and compiles everything to Horner evaluation
tapes per working precision on demand.

The Horner factorisation is canonical: a polynomial is treated as
univariate in the lowest-index variable that occurs, with polynomial
coefficients that recurse over the remaining variables; gaps between
exponents become repeated multiplications.  The factorisation is
precision-independent, so a tape is built once and only the coefficient
enclosures vary with precision (each integer coefficient becomes the
tightest enclosing interval at the target precision; exactly
representable coefficients become point intervals).
"""

import re

import gmpy2
import numpy as np

from fractions import Fraction
from gmpy2 import mpfr

from . import _kernel
from . import _rounding as rnd
from ._rounding import DOUBLE_PREC
from .interval import IBox, Interval


class SystemSyntaxError(ValueError):
    """Syntax error in a system file, with 1-based line and column."""

    def __init__(self, msg, line, col):
        super().__init__("line %d, column %d: %s" % (line, col, msg))
        self.line = line
        self.col = col


class UnknownVariableError(SystemSyntaxError):
    """An identifier in a polynomial is not a declared variable."""


class NonSquareError(ValueError):
    """The number of polynomials differs from the number of variables."""


class MPoly:
    """Sparse polynomial in m variables over the integers."""

    __slots__ = ("m", "terms")

    def __init__(self, m, terms=None):
        self.m = m
        t = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    t[tuple(exps)] = c
        self.terms = t

    @classmethod
    def constant(cls, m, c):
        return cls(m, {(0,) * m: c})

    @classmethod
    def variable(cls, m, i):
        e = [0] * m
        e[i] = 1
        return cls(m, {tuple(e): 1})

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def sorted_terms(self):
        """Terms in canonical graded lexicographic order, leading first
        (total degree descending, then exponents lexicographically
        descending)."""
        return sorted(self.terms.items(),
                      key=lambda it: (-sum(it[0]), tuple(-e for e in it[0])))

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return MPoly(self.m, t)

    def __sub__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) - c
        return MPoly(self.m, t)

    def __neg__(self):
        return MPoly(self.m, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly(self.m, t)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial power needs a non-negative integer")
        out = MPoly.constant(self.m, 1)
        for _ in range(n):
            out = out * self
        return out

    def _coerce(self, other):
        if isinstance(other, int):
            return MPoly.constant(self.m, other)
        if not isinstance(other, MPoly) or other.m != self.m:
            raise TypeError("incompatible polynomial operand")
        return other

    def diff(self, i):
        """Exact partial derivative with respect to variable i."""
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return MPoly(self.m, t)

    def eval_fraction(self, point):
        """Exact evaluation at a rational point (tests and oracles)."""
        acc = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    term *= Fraction(x) ** k
            acc += term
        return acc

    def to_text(self, names):
        """Canonical text form over the given variable names."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                ("%s^%d" % (names[i], k)) if k > 1 else names[i]
                for i, k in enumerate(e) if k)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = "%d*%s" % (mag, mono)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __eq__(self, other):
        return (isinstance(other, MPoly) and other.m == self.m
                and other.terms == self.terms)

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def __repr__(self):
        return "MPoly(%d, %s)" % (self.m, self.to_text(
            ["x%d" % (i + 1) for i in range(self.m)]))


# ---------------------------------------------------------------------------
# System file parsing.
#
#   vars x y
#   f: x^2 + y^2 - 1     # a comment
#   g: x - y
#
# expr   := term (('+'|'-') term)*
# term   := ['-'] factor ('*' factor)*
# factor := base ('^' uint)?
# base   := integer | variable | '(' expr ')'
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_]\w*)"
                       r"|(?P<op>[-+*^():]))")


def _tokenize(text, lineno):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = pos + (len(text[pos:]) - len(stripped)) + 1
            raise SystemSyntaxError(
                "unexpected character %r" % stripped[0], lineno, col)
        pos = m.end()
        for kind in ("int", "ident", "op"):
            if m.group(kind) is not None:
                out.append((kind, m.group(kind), m.start(kind) + 1))
                break
    return out


class _ExprParser:
    def __init__(self, tokens, lineno, varindex):
        self.tokens = tokens
        self.lineno = lineno
        self.varindex = varindex
        self.pos = 0

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self):
        tok = self._peek()
        if tok is None:
            raise SystemSyntaxError("unexpected end of line", self.lineno,
                                    self.tokens[-1][2] if self.tokens else 1)
        self.pos += 1
        return tok

    def parse(self):
        e = self.expr()
        tok = self._peek()
        if tok is not None:
            raise SystemSyntaxError("trailing input %r" % tok[1],
                                    self.lineno, tok[2])
        return e

    def expr(self):
        acc = self.term()
        while True:
            tok = self._peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self._next()
                t = self.term()
                acc = acc + t if tok[1] == "+" else acc - t
            else:
                return acc

    def term(self):
        neg = False
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self._next()
            neg = True
        acc = self.factor()
        while True:
            tok = self._peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self._next()
                acc = acc * self.factor()
            else:
                return -acc if neg else acc

    def factor(self):
        base = self.base()
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self._next()
            etok = self._next()
            if etok[0] != "int":
                raise SystemSyntaxError("exponent must be an unsigned integer",
                                        self.lineno, etok[2])
            return base ** int(etok[1])
        return base

    def base(self):
        tok = self._next()
        kind, text, col = tok
        m = len(self.varindex)
        if kind == "int":
            return MPoly.constant(m, int(text))
        if kind == "ident":
            if text not in self.varindex:
                raise UnknownVariableError("unknown variable %r" % text,
                                           self.lineno, col)
            return MPoly.variable(m, self.varindex[text])
        if kind == "op" and text == "(":
            e = self.expr()
            closing = self._next()
            if closing[1] != ")":
                raise SystemSyntaxError("expected ')'", self.lineno, closing[2])
            return e
        raise SystemSyntaxError("expected integer, variable or '('",
                                self.lineno, col)


def parse_system(text):
    """Parse a system file into a :class:`PolySystem`.

    The first content line declares the variables (``vars x y``); each
    following content line is ``name: polynomial``.  ``#`` starts a
    comment.  Raises :class:`SystemSyntaxError` (with line/column),
    :class:`UnknownVariableError`, or :class:`NonSquareError`.
    """
    varnames = None
    varindex = {}
    polys = []
    names = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = _tokenize(line, lineno)
        if varnames is None:
            if not tokens or tokens[0][:2] != ("ident", "vars"):
                raise SystemSyntaxError("expected 'vars' declaration",
                                        lineno, tokens[0][2] if tokens else 1)
            if len(tokens) < 2:
                raise SystemSyntaxError("at least one variable required",
                                        lineno, tokens[0][2])
            varnames = []
            for kind, name, col in tokens[1:]:
                if kind != "ident":
                    raise SystemSyntaxError("bad variable name %r" % name,
                                            lineno, col)
                if name in varindex:
                    raise SystemSyntaxError("duplicate variable %r" % name,
                                            lineno, col)
                varindex[name] = len(varnames)
                varnames.append(name)
            continue
        if len(tokens) < 2 or tokens[0][0] != "ident" or tokens[1][:2] != ("op", ":"):
            raise SystemSyntaxError("expected 'name: polynomial'",
                                    lineno, tokens[0][2])
        pname = tokens[0][1]
        if pname in names:
            raise SystemSyntaxError("duplicate polynomial name %r" % pname,
                                    lineno, tokens[0][2])
        poly = _ExprParser(tokens[2:], lineno, varindex).parse()
        names.append(pname)
        polys.append(poly)
    if varnames is None:
        raise SystemSyntaxError("empty system", 1, 1)
    if len(polys) != len(varnames):
        raise NonSquareError(
            "%d polynomials for %d variables" % (len(polys), len(varnames)))
    return PolySystem(varnames, polys, names)


# ---------------------------------------------------------------------------
# Horner tapes.
# ---------------------------------------------------------------------------

_PUSH_COEFF = 0
_MUL_VAR = 1
_ADD = 2


def _emit_tape(terms, m, opc, opa, pool, pool_index):
    def coeff_ref(c):
        idx = pool_index.get(c)
        if idx is None:
            idx = len(pool)
            pool_index[c] = idx
            pool.append(c)
        return idx

    if not terms:
        opc.append(_PUSH_COEFF)
        opa.append(coeff_ref(0))
        return
    split = -1
    for e in terms:
        for i in range(m):
            if e[i] > 0 and (split == -1 or i < split):
                split = i
                break
    if split == -1:
        opc.append(_PUSH_COEFF)
        opa.append(coeff_ref(terms[(0,) * m]))
        return
    groups = {}
    for e, c in sorted(terms.items()):
        rest = list(e)
        k = rest[split]
        rest[split] = 0
        groups.setdefault(k, {})[tuple(rest)] = c
    exps = sorted(groups, reverse=True)
    _emit_tape(groups[exps[0]], m, opc, opa, pool, pool_index)
    prev = exps[0]
    for k in exps[1:]:
        for _ in range(prev - k):
            opc.append(_MUL_VAR)
            opa.append(split)
        _emit_tape(groups[k], m, opc, opa, pool, pool_index)
        opc.append(_ADD)
        opa.append(0)
        prev = k
    for _ in range(prev):
        opc.append(_MUL_VAR)
        opa.append(split)


class _Structure:
    """Precision-independent tape layout for a whole system."""

    __slots__ = ("opc", "opa", "starts", "pool")

    def __init__(self, polys, m):
        opc = []
        opa = []
        starts = [0]
        pool = []
        pool_index = {}
        for p in polys:
            _emit_tape(p.terms, m, opc, opa, pool, pool_index)
            starts.append(len(opc))
        self.opc = np.asarray(opc, dtype=np.int32)
        self.opa = np.asarray(opa, dtype=np.int32)
        self.starts = np.asarray(starts, dtype=np.int64)
        self.pool = pool


class CompiledSystem:
    """Evaluation tapes of a system with coefficient enclosures at one
    working precision.  Obtained from :meth:`PolySystem.compile`, which
    caches one instance per precision."""

    __slots__ = ("system", "bits", "clo", "chi", "rounder")

    def __init__(self, system, bits):
        self.system = system
        self.bits = bits
        pool = system.structure.pool
        if bits == DOUBLE_PREC:
            self.rounder = None
            self.clo = np.array([rnd.float_from_value_down(c) for c in pool],
                                dtype=np.float64)
            self.chi = np.array([rnd.float_from_value_up(c) for c in pool],
                                dtype=np.float64)
        else:
            self.rounder = rnd.mpfr_rounder(bits)
            self.clo = [self.rounder.from_value_down(c) for c in pool]
            self.chi = [self.rounder.from_value_up(c) for c in pool]

    def coeff_enclosure(self, c):
        """Enclosure of an integer coefficient at this precision."""
        if self.bits == DOUBLE_PREC:
            return Interval(rnd.float_from_value_down(c),
                            rnd.float_from_value_up(c), self.bits)
        return Interval(self.rounder.from_value_down(c),
                        self.rounder.from_value_up(c), self.bits)

    def eval_ids(self, pids, box):
        """Evaluate the tapes `pids` over an IBox, returning Intervals."""
        st = self.system.structure
        if self.bits == DOUBLE_PREC:
            xlo = np.array([iv.lo for iv in box.ivs], dtype=np.float64)
            xhi = np.array([iv.hi for iv in box.ivs], dtype=np.float64)
            ids = np.asarray(pids, dtype=np.int64)
            out_lo = np.empty(len(pids), dtype=np.float64)
            out_hi = np.empty(len(pids), dtype=np.float64)
            _kernel.eval_tapes(st.opc, st.opa, st.starts, self.clo, self.chi,
                               ids, xlo, xhi, out_lo, out_hi)
            return [Interval(float(out_lo[i]), float(out_hi[i]), DOUBLE_PREC)
                    for i in range(len(pids))]
        xlo = [iv.lo for iv in box.ivs]
        xhi = [iv.hi for iv in box.ivs]
        return [self._eval_mpfr(pid, xlo, xhi) for pid in pids]

    def _eval_mpfr(self, pid, xlo, xhi):
        st = self.system.structure
        r = self.rounder
        stack = []
        for k in range(st.starts[pid], st.starts[pid + 1]):
            code = st.opc[k]
            arg = st.opa[k]
            if code == _PUSH_COEFF:
                stack.append((self.clo[arg], self.chi[arg]))
            elif code == _MUL_VAR:
                alo, ahi = stack[-1]
                blo, bhi = xlo[arg], xhi[arg]
                if not (gmpy2.is_finite(alo) and gmpy2.is_finite(ahi)
                        and gmpy2.is_finite(blo) and gmpy2.is_finite(bhi)):
                    stack[-1] = (mpfr("-inf"), mpfr("inf"))
                    continue
                lo = min(r.mul_down(alo, blo), r.mul_down(alo, bhi),
                         r.mul_down(ahi, blo), r.mul_down(ahi, bhi))
                hi = max(r.mul_up(alo, blo), r.mul_up(alo, bhi),
                         r.mul_up(ahi, blo), r.mul_up(ahi, bhi))
                stack[-1] = (lo, hi)
            else:
                blo, bhi = stack.pop()
                alo, ahi = stack[-1]
                stack[-1] = (r.add_down(alo, blo), r.add_up(ahi, bhi))
        lo, hi = stack[0]
        return Interval(lo, hi, self.bits)


def _tri_size(m):
    return m * (m + 1) // 2


class PolySystem:
    """A square polynomial system with its symbolic derivatives.

    Parameters
    ----------
    varnames : sequence of str
        Variable names, defining the evaluation order x_1 < x_2 < ...
    polys : sequence of MPoly
        One polynomial per variable (square system).
    names : sequence of str, optional
        Display names of the polynomials.
    """

    def __init__(self, varnames, polys, names=None):
        varnames = list(varnames)
        polys = list(polys)
        if len(polys) != len(varnames):
            raise NonSquareError("%d polynomials for %d variables"
                                 % (len(polys), len(varnames)))
        self.varnames = varnames
        self.m = len(varnames)
        self.polys = polys
        self.names = list(names) if names else \
            ["f%d" % (i + 1) for i in range(self.m)]
        m = self.m
        self.jacobian = [[p.diff(j) for j in range(m)] for p in polys]
        # Hessians are symmetric: keep the upper triangle (j <= k)
        self.hessians = [[self.jacobian[i][j].diff(k)
                          for j in range(m) for k in range(j, m)]
                         for i in range(m)]
        self._structure = None
        self._compiled = {}

    @classmethod
    def parse(cls, text):
        return parse_system(text)

    # -- tape ids -------------------------------------------------------

    def f_pid(self, i):
        return i

    def jac_pid(self, i, j):
        return self.m + i * self.m + j

    def hess_pid(self, i, j, k):
        if j > k:
            j, k = k, j
        tri = j * self.m - j * (j - 1) // 2 + (k - j)
        return self.m + self.m * self.m + i * _tri_size(self.m) + tri

    @property
    def structure(self):
        if self._structure is None:
            flat = list(self.polys)
            for row in self.jacobian:
                flat.extend(row)
            for tri in self.hessians:
                flat.extend(tri)
            self._structure = _Structure(flat, self.m)
        return self._structure

    def compile(self, bits):
        """Compiled tapes at `bits` precision (cached per precision)."""
        cs = self._compiled.get(bits)
        if cs is None:
            cs = self._compiled.setdefault(bits, CompiledSystem(self, bits))
        return cs

    # -- text -----------------------------------------------------------

    def to_text(self):
        """System file text that re-parses to a structurally equal system."""
        lines = ["vars " + " ".join(self.varnames)]
        for name, p in zip(self.names, self.polys):
            lines.append("%s: %s" % (name, p.to_text(self.varnames)))
        return "\n".join(lines) + "\n"

    def domain_box(self, bounds, prec=DOUBLE_PREC):
        if len(bounds) != self.m:
            raise NonSquareError("domain dimension %d for %d variables"
                                 % (len(bounds), self.m))
        return IBox.from_bounds(bounds, prec)

    def __repr__(self):
        return "PolySystem(%s)" % ", ".join(
            "%s: %s" % (n, p.to_text(self.varnames))
            for n, p in zip(self.names, self.polys))
