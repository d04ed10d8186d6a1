"""Exact real-root isolation for univariate rational polynomials.

Polynomials are handled as primitive integer coefficient lists (low to
high); scaling by a positive constant never changes a sign, which is all
the root counting needs.  Sturm chains certify every count.
"""

from dataclasses import dataclass, field
from math import lcm

from gmpy2 import mpq

from . import kernels
from .errors import ToolkitError

MAX_BISECTIONS = 20_000


def _as_mpq(x):
    return x if isinstance(x, type(mpq(0))) else mpq(x)


def int_coeffs(p, var=None):
    """Primitive integer coefficients of a univariate polynomial over Q.

    Accepts a :class:`MultiPoly` (univariate in ``var``) or a coefficient list.
    """
    if hasattr(p, "univariate_coeffs"):
        if var is None:
            var = p.vars[0] if p.vars else "T"
        coeffs = [_as_mpq(c) for c in p.univariate_coeffs(var)]
    else:
        coeffs = [_as_mpq(c) for c in p]
    if not any(coeffs):
        return []
    den = 1
    for c in coeffs:
        den = lcm(den, int(c.denominator))
    ints = [int(c * den) for c in coeffs]
    return kernels._pykernels._primitive(kernels._pykernels._strip(ints))


def poly_gcd(f, g):
    """GCD of integer polynomials (primitive, positive leading coefficient)."""
    a, b = list(f), list(g)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = kernels.signed_prem(a, b)
        a, b = b, kernels._pykernels._primitive(r) if r else []
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a


def poly_divexact(f, g):
    """``f / g`` scaled to a primitive integer polynomial (positive factor)."""
    f = [mpq(x) for x in f]
    q = [mpq(0)] * (len(f) - len(g) + 1)
    lc = mpq(g[-1])
    for k in range(len(q) - 1, -1, -1):
        c = f[k + len(g) - 1] / lc
        q[k] = c
        for i, gi in enumerate(g):
            f[k + i] -= c * gi
    if any(f):
        raise ArithmeticError("inexact polynomial division")
    out = int_coeffs(q)
    # int_coeffs scales by a positive number; keep the sign of f/g
    return out


def squarefree(f):
    if len(f) <= 2:
        return list(f)
    df = [i * c for i, c in enumerate(f)][1:]
    g = poly_gcd(f, df)
    if len(g) <= 1:
        return list(f)
    return poly_divexact(f, g)


def sign_at(f, x):
    x = _as_mpq(x)
    return kernels.eval_sign(f, int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class RootInterval:
    """Either an exact root (``lo == hi``) or an open interval ``(lo, hi)``
    holding exactly one root, with the polynomial nonzero at both ends."""

    lo: object
    hi: object

    @property
    def exact(self):
        return self.lo == self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def __contains__(self, x):
        return self.lo == x if self.exact else self.lo < x < self.hi


class SturmPoly:
    """A square-free integer polynomial together with its Sturm chain."""

    def __init__(self, coeffs):
        if not coeffs:
            raise ToolkitError("cannot isolate the roots of the zero polynomial")
        self.original = list(coeffs)
        self.sqf = squarefree(list(coeffs))
        self.chain = kernels.sturm_chain(self.sqf)

    def variations(self, x):
        x = _as_mpq(x)
        return kernels.sign_variations(self.chain, int(x.numerator), int(x.denominator))

    def sign(self, x):
        return sign_at(self.sqf, x)

    def count(self, a, b):
        """Number of distinct real roots in the half-open interval (a, b]."""
        if len(self.sqf) <= 1:
            return 0
        return self.variations(a) - self.variations(b)

    def count_closed(self, a, b):
        return self.count(a, b) + (1 if self.sign(a) == 0 else 0)

    def refine(self, iv, width=None, avoid=None, steps=1):
        """Bisect an open root interval ``steps`` times, or until ``width``."""
        if iv.exact:
            return iv
        lo, hi = iv.lo, iv.hi
        s_lo = self.sign(lo)
        n = 0
        while n < steps or (width is not None and hi - lo > width):
            m = (lo + hi) / 2
            sm = self.sign(m)
            if sm == 0:
                return RootInterval(m, m)
            if sm == s_lo:
                lo = m
            else:
                hi = m
            n += 1
            if n > MAX_BISECTIONS:
                raise ToolkitError("root refinement did not converge")
        return RootInterval(lo, hi)

    def isolate(self, lo=0, hi=1):
        lo, hi = _as_mpq(lo), _as_mpq(hi)
        out = []
        if len(self.sqf) <= 1:
            return out
        if self.sign(lo) == 0:
            out.append(RootInterval(lo, lo))
        if hi != lo and self.sign(hi) == 0:
            out.append(RootInterval(hi, hi))
        stack = [(lo, hi)]
        guard = 0
        while stack:
            a, b = stack.pop()
            c = self.count(a, b) - (1 if self.sign(b) == 0 else 0)
            if c <= 0:
                continue
            if c == 1 and self.sign(a) != 0 and self.sign(b) != 0:
                out.append(RootInterval(a, b))
                continue
            m = (a + b) / 2
            if self.sign(m) == 0:
                out.append(RootInterval(m, m))
            stack.append((a, m))
            stack.append((m, b))
            guard += 1
            if guard > MAX_BISECTIONS:
                raise ToolkitError("root isolation did not converge")
        out.sort(key=lambda iv: (iv.lo, iv.hi))
        return out


@dataclass
class RootIsolation:
    polynomial: object
    lo: object
    hi: object
    intervals: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.intervals)


def isolate_real_roots(p, lo=0, hi=1, width=None, var=None):
    """Isolating intervals for the distinct real roots of ``p`` in [lo, hi].

    ``p`` is a univariate :class:`MultiPoly` over Q (or a rational coefficient
    list).  Intervals are refined to ``width`` when given.
    """
    coeffs = int_coeffs(p, var)
    if not coeffs:
        raise ToolkitError("cannot isolate the roots of the zero polynomial")
    sp = SturmPoly(coeffs)
    ivs = sp.isolate(lo, hi)
    if width is not None:
        width = _as_mpq(width)
        ivs = [sp.refine(iv, width=width, steps=0) for iv in ivs]
    iso = RootIsolation(p, _as_mpq(lo), _as_mpq(hi), ivs)
    expected = sp.count_closed(_as_mpq(lo), _as_mpq(hi))
    if expected != len(ivs):
        raise ToolkitError(f"isolation found {len(ivs)} roots, Sturm count is {expected}")
    return iso


def count_roots(p, lo=0, hi=1, var=None):
    """Distinct real roots of ``p`` in the closed interval [lo, hi]."""
    coeffs = int_coeffs(p, var)
    if not coeffs:
        raise ToolkitError("the zero polynomial has infinitely many roots")
    return SturmPoly(coeffs).count_closed(_as_mpq(lo), _as_mpq(hi))
