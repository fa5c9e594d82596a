"""Reproducible random dense polynomial systems.

The generator is pinned to splitmix64 so that a (m, d, coeff_bits,
seed) tuple denotes the same system in any implementation or language:
one stream is seeded with `seed`, and for each polynomial (in order)
and each exponent vector of total degree <= d (in graded
lexicographic order, i.e. sorted by total degree then tuple order) two
values are drawn from it: first the magnitude, uniform over
[1, 2^coeff_bits - 1] by rejection sampling, then one value whose low
bit sets the sign (set bit = negative).  Every monomial is present:
the draws are never skipped, so systems of equal shape consume equal
stream prefixes.
"""

from .mpoly import MPoly, PolySystem

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 stream (Steele, Lea & Flood's SplittableRandom finalizer)."""

    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & _MASK64

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n):
        """Uniform draw from [0, n), bias-free by rejection."""
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            v = self.next()
            if v < limit:
                return v % n


def monomials(m, d):
    """Exponent vectors of total degree <= d in graded lex order."""
    out = []
    e = [0] * m

    def rec(i, left):
        if i == m:
            out.append(tuple(e))
            return
        for k in range(left + 1):
            e[i] = k
            rec(i + 1, left - k)
        e[i] = 0

    rec(0, d)
    out.sort(key=lambda t: (sum(t), t))
    return out


def random_system(m, d, coeff_bits, seed):
    """Dense random system: m polynomials of degree d in m variables,
    every monomial of total degree <= d present, integer coefficients
    uniform over [-(2^coeff_bits - 1), 2^coeff_bits - 1] without 0."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if d < 1:
        raise ValueError("d must be >= 1")
    if coeff_bits < 1:
        raise ValueError("coeff_bits must be >= 1")
    rng = SplitMix64(seed)
    exps = monomials(m, d)
    top = (1 << coeff_bits) - 1
    polys = []
    for _ in range(m):
        terms = {}
        for e in exps:
            mag = 1 + rng.below(top)
            sign = -1 if rng.next() & 1 else 1
            terms[e] = sign * mag
        polys.append(MPoly(m, terms))
    varnames = ["x%d" % (i + 1) for i in range(m)]
    names = ["p%d" % (i + 1) for i in range(m)]
    return PolySystem(varnames, polys, names)
