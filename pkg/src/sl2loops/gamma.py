"""Unimodular rows of length two, the group structure on their classes,
verification of Quillen-type splittings, and the circle ring."""

from dataclasses import dataclass, field
from functools import cached_property

from gmpy2 import mpq

from .errors import NotUnimodular, OriginHit, PreconditionError, UnknownUnimodular
from .matrix import Mat2, Verdict
from .poly import MultiPoly, poly
from .polyrings import (
    Localization,
    PolynomialRing,
    Quotient,
    localization_equal,
    localization_map,
)
from .rings import QQ, Rationals
from .sturm import SturmPoly, int_coeffs
from .winding import quadrant_itinerary, quarter_turns


@dataclass(frozen=True)
class UnimodRow:
    """``(a, b)`` with a witness ``a*b1 + b*b2 = 1`` checked on construction."""

    a: MultiPoly
    b: MultiPoly
    b1: MultiPoly
    b2: MultiPoly

    def __post_init__(self):
        ring = self.a.ring
        for name in ("b", "b1", "b2"):
            object.__setattr__(self, name, poly(ring, getattr(self, name)))
        if self.a * self.b1 + self.b * self.b2 != 1:
            raise NotUnimodular(f"witness identity fails: {self.a}*({self.b1}) + {self.b}*({self.b2}) != 1")

    @property
    def ring(self):
        return self.a.ring

    @property
    def witness(self):
        return (self.b1, self.b2)

    def __iter__(self):
        return iter((self.a, self.b))


# -- witnesses ----------------------------------------------------------------
def _divmod(f, g):
    """Quotient and remainder of rational coefficient lists (low to high)."""
    f = list(f)
    q = [mpq(0)] * max(len(f) - len(g) + 1, 1)
    lc = g[-1]
    while len(f) >= len(g) and any(f):
        c = f[-1] / lc
        k = len(f) - len(g)
        q[k] = c
        for i, gi in enumerate(g):
            f[k + i] -= c * gi
        while f and not f[-1]:
            f.pop()
    return q, f


def _trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def _mul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _sub(a, b):
    n = max(len(a), len(b))
    a, b = a + [mpq(0)] * (n - len(a)), b + [mpq(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def euclid_witness(a, b, var=None):
    """``(b1, b2)`` with ``a*b1 + b*b2 = 1`` for univariate rows over Q.

    Returns ``None`` when the gcd is not a nonzero constant.
    """
    if a.ring != QQ or b.ring != QQ:
        raise PreconditionError("extended Euclid needs coefficients in Q")
    vs = set(a.vars) | set(b.vars)
    if len(vs) > 1:
        raise PreconditionError(f"extended Euclid needs a univariate row, got {sorted(vs)}")
    v = var or (vs.pop() if vs else "T")
    r0 = _trim(a.univariate_coeffs(v)) if a else []
    r1 = _trim(b.univariate_coeffs(v)) if b else []
    s0, s1, t0, t1 = [mpq(1)], [], [], [mpq(1)]
    while r1:
        q, r = _divmod(r0, r1)
        q = _trim(q)
        r0, r1 = r1, _trim(r)
        s0, s1 = s1, _sub(s0, _mul(q, s1))
        t0, t1 = t1, _sub(t0, _mul(q, t1))
    if len(r0) != 1:
        return None
    inv = 1 / r0[0]
    b1 = MultiPoly.univariate(QQ, v, [c * inv for c in s0]) if s0 else MultiPoly.zero(QQ)
    b2 = MultiPoly.univariate(QQ, v, [c * inv for c in t0]) if t0 else MultiPoly.zero(QQ)
    return b1, b2


def verify_unimodular(a, b, witness=None):
    """Check or find a witness for ``(a, b)``.

    Searching only happens over Q and Q[T]; elsewhere a missing witness is
    reported as unknown rather than as a failure of unimodularity.
    """
    ring = a.ring
    b = poly(ring, b)
    if witness is not None:
        return UnimodRow(a, b, *witness)
    if isinstance(ring, Rationals) and len(set(a.vars) | set(b.vars)) <= 1:
        w = euclid_witness(a, b)
        if w is None:
            raise NotUnimodular(f"gcd of {a} and {b} is not a unit")
        return UnimodRow(a, b, *w)
    raise UnknownUnimodular(f"no witness given and no search available over {ring}")


# -- completion and the product ---------------------------------------------
def complete_row(r):
    """``[[a, -b2], [b, b1]]``: determinant ``a*b1 + b*b2 = 1``."""
    return Mat2(r.a, -r.b2, r.b, r.b1)


def gamma_product(r, s):
    """First column of the product of the two completions.

    The witness is the first row of the inverse product matrix.
    """
    if r.ring != s.ring:
        raise PreconditionError(f"rows over {r.ring} and {s.ring}")
    p = complete_row(r) @ complete_row(s)
    return UnimodRow(p.e11, p.e21, p.e22, -p.e12)


def identity_row(ring=QQ):
    return UnimodRow(MultiPoly.one(ring), MultiPoly.zero(ring), MultiPoly.one(ring), MultiPoly.zero(ring))


@dataclass(frozen=True)
class GammaEquivCert:
    """``path(T)`` joins the identity to ``target``, which sends ``row_in`` to ``row_out``."""

    path: Mat2
    target: Mat2
    row_in: UnimodRow
    row_out: UnimodRow
    var: str = "T"


def gamma_equiv_verify(cert):
    t = cert.var
    bad = []
    if cert.path.det() != 1:
        bad.append(f"det of the path is {cert.path.det()}, not 1")
    if not cert.path.subs({t: 0}).is_identity():
        bad.append(f"path at {t}=0 is not the identity")
    if cert.path.subs({t: 1}) != cert.target:
        bad.append(f"path at {t}=1 differs from the target matrix")
    image = cert.target.apply((cert.row_in.a, cert.row_in.b))
    if image != (cert.row_out.a, cert.row_out.b):
        bad.append(f"target sends the input row to ({image[0]}, {image[1]}), not the output row")
    return Verdict(not bad, bad)


# -- Quillen splitting ----------------------------------------------------------
def _map_matrix(m, target):
    """Entrywise localization map on matrices with polynomial entries."""
    return m.map(lambda e: e.map_coeffs(lambda c: localization_map(c, target), target))


def _poly_equal(e, f):
    """Coefficientwise cross-multiplication test."""
    d = e - f
    zero = e.ring.zero()
    return all(localization_equal(c, zero) for c in d.terms.values())


@dataclass(frozen=True)
class QuillenData:
    base: object
    s: object
    t: object
    u: object
    v: object
    sigma: Mat2
    psi1: Mat2
    psi2: Mat2
    var: str = "X"


def quillen_split_verify(d):
    """Check ``sigma = (psi1)_t (psi2)_s`` over ``R[1/st]`` plus side conditions."""
    R, x = d.base, d.var
    s, t = R.coerce(d.s), R.coerce(d.t)
    bad = []
    if s * R.coerce(d.u) + t * R.coerce(d.v) != R.one():
        bad.append("comaximality witness fails: s*u + t*v != 1")
    rs, rt, rst = Localization(R, s), Localization(R, t), Localization(R, s * t)
    for name, m, ring in (("sigma", d.sigma, rst), ("psi1", d.psi1, rs), ("psi2", d.psi2, rt)):
        if m.ring != ring:
            bad.append(f"{name} is over {m.ring}, expected {ring}")
    if bad:
        return Verdict(False, bad)
    for name, m in (("sigma", d.sigma), ("psi1", d.psi1), ("psi2", d.psi2)):
        extra = m.vars - {x}
        if extra:
            bad.append(f"{name} has variables {sorted(extra)} besides {x}")
        if not m.subs({x: 0}).is_identity():
            bad.append(f"{name}({x}=0) is not the identity")
        det = m.det()
        if det.vars or not m.ring.is_unit(det.constant() if det else m.ring.zero()):
            bad.append(f"det {name} = {det} is not a unit")
    prod = _map_matrix(d.psi1, rst) @ _map_matrix(d.psi2, rst)
    for name, e, f in zip(("(1,1)", "(1,2)", "(2,1)", "(2,2)"), prod.entries, d.sigma.entries):
        if not _poly_equal(e, f):
            bad.append(f"entry {name}: psi1*psi2 gives {e}, sigma has {f}")
    return Verdict(not bad, bad)


# -- the circle ring ------------------------------------------------------------
def circle_ring():
    """``Q[x, y] / (x^2 + y^2 - 1)``, reduced in ``y``."""
    base = PolynomialRing(QQ, ("x", "y"))
    x, y = MultiPoly.var(QQ, "x"), MultiPoly.var(QQ, "y")
    return Quotient(base, x * x + y * y - 1, "y", domain=True)


@dataclass(frozen=True)
class CircleCharts:
    """``A`` with its localizations at ``u = 1 - y``, ``v = 1 + y`` and ``uv``,
    plus the stereographic coordinate rings ``Q[eta]`` localized at
    ``1 + eta^2`` (and at ``eta^2 (1 + eta^2)`` for the overlap)."""

    A: Quotient
    A_u: Localization
    A_v: Localization
    A_uv: Localization
    E: PolynomialRing
    E_u: Localization
    E_v: Localization
    E_uv: Localization

    def _gens(self):
        A = self.A
        return A.gen("x"), A.gen("y")

    @cached_property
    def u(self):
        return 1 - self._gens()[1]

    @cached_property
    def v(self):
        return 1 + self._gens()[1]

    def _chart(self, which):
        eta = MultiPoly.var(QQ, "eta")
        D = 1 + eta * eta
        if which == "u":
            return self.A_u, self.E_u, 2 * eta, eta * eta - 1, D
        return self.A_v, self.E_v, 2 * eta, 1 - eta * eta, D

    def to_eta(self, e, which="u"):
        """``x -> 2 eta/(1+eta^2)``, ``y -> (+-(eta^2-1))/(1+eta^2)``, ``u^-1, v^-1 -> (1+eta^2)/2``."""
        src, dst, X, Y, D = self._chart(which)
        e = src.coerce(e)
        rep = e.num.rep
        n = rep.total_degree() if rep else 0
        num = homogenized_substitute(rep, X, Y, D, n)
        num = num * D**e.power * mpq(1, 2**e.power)
        return dst.fraction(num, n)

    def from_eta(self, e, which="u"):
        """``eta -> x/u`` (or ``x/v``) and ``(1+eta^2)^-1 -> u/2`` (or ``v/2``)."""
        src, dst, *_ = self._chart(which)
        src_el = dst.coerce(e)
        A = self.A
        w = self.u if which == "u" else self.v
        x = A.gen("x")
        q = src_el.num
        coeffs = q.univariate_coeffs("eta") if q else [mpq(0)]
        k = len(coeffs) - 1
        total = A.zero()
        for j, c in enumerate(coeffs):
            if c:
                total = total + A.coerce(c) * x**j * w ** (k - j)
        total = total * w**src_el.power * A.coerce(mpq(1, 2**src_el.power))
        return src.fraction(total, k)


def homogenized_substitute(p, X, Y, D, n):
    """``D^n * p(X/D, Y/D)`` for ``p`` in ``x, y`` of total degree at most ``n``."""
    out = MultiPoly.zero(QQ)
    cache = {}

    def pw(base, name, k):
        key = (name, k)
        if key not in cache:
            cache[key] = base**k
        return cache[key]

    for (c, mono) in p.monomials():
        i, j = mono.get("x", 0), mono.get("y", 0)
        out = out + c * pw(X, "X", i) * pw(Y, "Y", j) * pw(D, "D", n - i - j)
    return out


def circle_charts():
    A = circle_ring()
    y = A.gen("y")
    u, v = 1 - y, 1 + y
    E = PolynomialRing(QQ, ("eta",))
    eta = MultiPoly.var(QQ, "eta")
    D = 1 + eta * eta
    return CircleCharts(
        A=A,
        A_u=Localization(A, u),
        A_v=Localization(A, v),
        A_uv=Localization(A, u * v),
        E=E,
        E_u=Localization(E, D),
        E_v=Localization(E, D),
        E_uv=Localization(E, eta * eta * D),
    )


# -- degree on the circle ----------------------------------------------------------
# Both charts run counterclockwise over t in [-1, 1]; the first covers the
# right half of the circle from (0,-1) to (0,1), the second (t -> -1/t) the
# left half from (0,1) back to (0,-1).
def _chart_maps():
    t = MultiPoly.var(QQ, "t")
    D = 1 + t * t
    return ((1 - t * t, 2 * t, D), (t * t - 1, -2 * t, D))


def _rep(e, A):
    if isinstance(e, MultiPoly):
        if e.vars:
            raise PreconditionError(f"{e} has free variables {list(e.vars)}")
        e = e.constant() if e else A.zero()
    return A.coerce(e).rep


@dataclass
class CircleDegree:
    degree: int
    quarter_turns: int
    itinerary: list = field(default_factory=list)  # (chart, t, quadrant)


def circle_degree_details(row, A=None):
    A = A or circle_ring()
    if row.ring != A:
        raise PreconditionError(f"row is over {row.ring}, expected the circle ring")
    a, b = _rep(row.a, A), _rep(row.b, A)
    if not a or not b:
        return CircleDegree(0, 0, [])
    n = max(a.total_degree(), b.total_degree())
    samples = []
    for k, (X, Y, D) in enumerate(_chart_maps(), 1):
        f = homogenized_substitute(a, X, Y, D, n)
        g = homogenized_substitute(b, X, Y, D, n)
        q = int_coeffs(f * f + g * g, "t")
        if SturmPoly(q).count_closed(mpq(-1), mpq(1)):
            raise OriginHit(f"row vanishes on the circle in chart {k}; the witness cannot be valid")
        samples += [(k, s, quad) for s, quad in quadrant_itinerary(f, g, -1, 1, "t")]
    turns = quarter_turns([q for _, _, q in samples])
    return CircleDegree(turns // 4, turns, samples)


def circle_degree(row, A=None):
    """Topological degree of ``(a, b)`` restricted to the real circle."""
    return circle_degree_details(row, A).degree


def circle_product_row(r, s):
    """Pointwise complex product ``(a + b i)(c + d i)`` as a pair over ``A``."""
    return (r.a * s.a - r.b * s.b, r.a * s.b + r.b * s.a)
