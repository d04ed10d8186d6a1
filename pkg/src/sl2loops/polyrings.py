"""Rings whose elements are polynomials: Q[gens], quotients by one monic
relation, and localizations of a domain at one element."""

from dataclasses import dataclass, field
from .errors import IncompatibleRings, NotAUnit
from .poly import MultiPoly
from .rings import QQ, Ring


@dataclass(frozen=True)
class PolynomialRing(Ring):
    """``coeff[gens]``; elements are :class:`MultiPoly` over ``coeff``."""

    coeff: Ring = QQ
    gens: tuple = ()
    kind = "polynomial"

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(sorted(self.gens)))

    @property
    def is_domain(self):
        return self.coeff.is_domain

    def coerce(self, value):
        if isinstance(value, MultiPoly):
            if value.ring != self.coeff:
                if value.vars:
                    raise IncompatibleRings(f"{value} is not over {self.coeff}")
                value = MultiPoly.const(self.coeff, value.constant())
            extra = set(value.vars) - set(self.gens)
            if extra:
                raise IncompatibleRings(f"{sorted(extra)} are not generators of {self}")
            return value
        return MultiPoly.const(self.coeff, value)

    def gen(self, name):
        if name not in self.gens:
            return super().gen(name)
        return MultiPoly.var(self.coeff, name)

    def invert(self, x):
        x = self.coerce(x)
        if x.vars or not x.terms:
            raise NotAUnit(f"{x} is not a unit in {self}", obstruction="not a nonzero constant")
        return MultiPoly.const(self.coeff, self.coeff.invert(x.constant()))

    def exact_divide(self, a, b):
        a, b = self.coerce(a), self.coerce(b)
        if not b:
            return None
        return a.exact_div(b)

    def expand(self, x):
        return [(c, mono) for c, mono in self.coerce(x).monomials()]

    def __str__(self):
        return f"{self.coeff}[{','.join(self.gens)}]"


class QuotientElement:
    """Element of a :class:`Quotient`, stored as its reduced representative."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring, rep, reduced=False):
        self.ring = ring
        self.rep = rep if reduced else ring.reduce(rep)

    def _other(self, other):
        if isinstance(other, QuotientElement):
            if other.ring != self.ring:
                raise IncompatibleRings(f"{self.ring} vs {other.ring}")
            return other
        try:
            return self.ring.coerce(other)
        except IncompatibleRings:
            return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuotientElement(self.ring, self.rep + o.rep, reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuotientElement(self.ring, self.rep - o.rep, reduced=True)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QuotientElement(self.ring, -self.rep, reduced=True)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuotientElement(self.ring, self.rep * o.rep)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._other(other) if not isinstance(other, QuotientElement) else other
        if o is None:
            return NotImplemented
        return self.ring == o.ring and self.rep == o.rep

    def __hash__(self):
        return hash(self.rep)

    def __bool__(self):
        return bool(self.rep)

    def __repr__(self):
        return f"QuotientElement({self.rep})"


@dataclass(frozen=True)
class Quotient(Ring):
    """``Q[gens]/(relation)`` with ``relation`` monic in ``var``.

    Normal form: remainder after dividing by the relation as a polynomial in
    ``var``, i.e. every representative has ``var``-degree below that of the
    relation.  ``domain`` records whether the caller asserts the relation is
    prime; localizations check it.
    """

    base: PolynomialRing
    relation: MultiPoly
    var: str
    domain: bool = False
    kind = "quotient"
    _degree: int = field(default=0, compare=False, repr=False)
    _tail: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        rel = self.base.coerce(self.relation)
        if self.var not in self.base.gens:
            raise ValueError(f"{self.var!r} is not a generator of {self.base}")
        d = rel.degree(self.var)
        if d < 1:
            raise ValueError(f"relation {rel} does not involve {self.var}")
        lead = rel.coefficients(self.var)[d]
        if lead != 1:
            raise ValueError(f"relation {rel} is not monic in {self.var}")
        object.__setattr__(self, "relation", rel)
        object.__setattr__(self, "_degree", d)
        # var^d == tail  modulo the relation
        tail = MultiPoly.var(self.base.coeff, self.var) ** d - rel
        object.__setattr__(self, "_tail", tail)

    def __hash__(self):
        return hash((self.base, self.relation, self.var, self.domain))

    @property
    def gens(self):
        return self.base.gens

    @property
    def is_domain(self):
        return self.domain

    @property
    def degree(self):
        return self._degree

    def reduce(self, p):
        """Normal form of a polynomial over the base coefficients."""
        d = self._degree
        var = self.var
        tail = self._tail
        while True:
            if var not in p.vars:
                return p
            i = p.vars.index(var)
            high = {e: c for e, c in p.terms.items() if e[i] >= d}
            if not high:
                return p
            low = MultiPoly._raw(
                p.ring, p.vars, {e: c for e, c in p.terms.items() if e[i] < d}
            )
            shifted = {}
            for e, c in high.items():
                ne = e[:i] + (e[i] - d,) + e[i + 1 :]
                shifted[ne] = c
            p = low + MultiPoly._raw(p.ring, p.vars, shifted) * tail

    def coerce(self, value):
        if isinstance(value, QuotientElement):
            if value.ring != self:
                raise IncompatibleRings(f"{value.ring} vs {self}")
            return value
        return QuotientElement(self, self.base.coerce(value))

    def element(self, poly):
        return QuotientElement(self, self.base.coerce(poly))

    def gen(self, name):
        return QuotientElement(self, self.base.gen(name))

    def expand(self, x):
        return self.coerce(x).rep.monomials()

    # -- linear algebra over the other generators --------------------------
    def _split(self, p):
        """Coordinates of ``p`` in the basis 1, var, ..., var^(d-1)."""
        cs = p.coefficients(self.var)
        zero = MultiPoly.zero(self.base.coeff)
        return [cs.get(j, zero) for j in range(self._degree)]

    def _join(self, coords):
        v = MultiPoly.var(self.base.coeff, self.var)
        total = MultiPoly.zero(self.base.coeff)
        for j, c in enumerate(coords):
            total = total + c * v**j
        return total

    def _mult_matrix(self, s):
        v = MultiPoly.var(self.base.coeff, self.var)
        cols = [self._split(self.reduce(s.rep * v**j)) for j in range(self._degree)]
        return [[cols[j][i] for j in range(self._degree)] for i in range(self._degree)]

    def exact_divide(self, a, b):
        """Solve ``b*q == a``: Cramer's rule over the other generators."""
        a, b = self.coerce(a), self.coerce(b)
        if not b:
            return None
        m = self._mult_matrix(b)
        det = _det(m)
        if not det:
            return None
        rhs = self._split(a.rep)
        coords = []
        for j in range(self._degree):
            mj = [row[:j] + [rhs[i]] + row[j + 1 :] for i, row in enumerate(m)]
            q = _det(mj).exact_div(det)
            if q is None:
                return None
            coords.append(q)
        return QuotientElement(self, self._join(coords))

    def norm(self, x):
        """Determinant of multiplication by ``x`` over the other generators."""
        return _det(self._mult_matrix(self.coerce(x)))

    def invert(self, x):
        x = self.coerce(x)
        if not x:
            raise NotAUnit("0 is not invertible", obstruction="zero")
        q = self.exact_divide(self.one(), x)
        if q is None:
            raise NotAUnit(f"{x.rep} is not a unit in {self}", obstruction="norm is not a nonzero constant")
        return q

    def __str__(self):
        return f"{self.base}/({self.relation})"


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        if total is None:
            total = term
        elif j % 2:
            total = total - term
        else:
            total = total + term
    return total


class LocalElement:
    """``num / s**power`` with ``power`` minimal (``s`` does not divide ``num``
    when ``power > 0``)."""

    __slots__ = ("ring", "num", "power")

    def __init__(self, ring, num, power=0, canonical=False):
        self.ring = ring
        if canonical:
            self.num, self.power = num, power
        else:
            self.num, self.power = ring.canonical(num, power)

    def _other(self, other):
        if isinstance(other, LocalElement):
            if other.ring != self.ring:
                raise IncompatibleRings(f"{self.ring} vs {other.ring}")
            return other
        try:
            return self.ring.coerce(other)
        except IncompatibleRings:
            return None

    def _common(self, o):
        n = max(self.power, o.power)
        s = self.ring.s
        a = self.num * s ** (n - self.power) if n > self.power else self.num
        b = o.num * s ** (n - o.power) if n > o.power else o.num
        return a, b, n

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b, n = self._common(o)
        return LocalElement(self.ring, a + b, n)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b, n = self._common(o)
        return LocalElement(self.ring, a - b, n)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return LocalElement(self.ring, -self.num, self.power, canonical=True)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return LocalElement(self.ring, self.num * o.num, self.power + o.power)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.ring.invert(self) ** (-n)
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        o = other if isinstance(other, LocalElement) else self._other(other)
        if o is None:
            return NotImplemented
        return self.ring == o.ring and self.power == o.power and self.num == o.num

    def __hash__(self):
        return hash((self.num, self.power)) if self.power else hash(self.num)

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"LocalElement({self.num!r} / s^{self.power})"


@dataclass(frozen=True)
class Localization(Ring):
    """``base[1/s]`` for an integral domain ``base`` and nonzero ``s``."""

    base: Ring
    s: object
    kind = "localization"

    def __post_init__(self):
        if not self.base.is_domain:
            raise ValueError(f"{self.base} is not flagged as an integral domain")
        s = self.base.coerce(self.s)
        if not s:
            raise ValueError("cannot localize at zero")
        object.__setattr__(self, "s", s)

    is_domain = True

    @property
    def gens(self):
        return self.base.gens

    def canonical(self, num, power):
        base = self.base
        num = base.coerce(num)
        if not num:
            return num, 0
        while power > 0:
            q = base.exact_divide(num, self.s)
            if q is None:
                break
            num, power = q, power - 1
        return num, power

    def coerce(self, value):
        if isinstance(value, LocalElement):
            if value.ring != self:
                raise IncompatibleRings(f"{value.ring} vs {self}")
            return value
        return LocalElement(self, self.base.coerce(value), 0, canonical=True)

    def fraction(self, num, power):
        """The element ``num / s**power``."""
        return LocalElement(self, num, power)

    def gen(self, name):
        return self.coerce(self.base.gen(name))

    def s_inverse(self):
        return LocalElement(self, self.base.one(), 1)

    def invert(self, x, max_power=64):
        x = self.coerce(x)
        if not x:
            raise NotAUnit("0 is not invertible", obstruction="zero")
        # x = a/s^n is a unit iff a divides some power of s.
        base = self.base
        sp = base.one()
        for m in range(max_power + 1):
            c = base.exact_divide(sp, x.num)
            if c is not None:
                return LocalElement(self, c * self.s**x.power, m)
            sp = sp * self.s
        raise NotAUnit(
            f"{x} is not a unit in {self}",
            obstruction=f"numerator divides no power of s up to s^{max_power}",
        )

    def exact_divide(self, a, b):
        try:
            return self.coerce(a) * self.invert(b)
        except NotAUnit:
            return None

    def to_common(self, elements):
        """Write several elements over one denominator ``s**n``.

        Returns ``(numerators, n)``.
        """
        elements = [self.coerce(e) for e in elements]
        n = max((e.power for e in elements), default=0)
        nums = [e.num * self.s ** (n - e.power) for e in elements]
        return nums, n

    def __str__(self):
        return f"{self.base}[1/({self.s})]"


def localization_equal(x, y):
    """Cross-multiplication test ``x.num * s^m == y.num * s^n`` in the base."""
    if not isinstance(x, LocalElement) or not isinstance(y, LocalElement):
        raise IncompatibleRings("localization_equal needs two localization elements")
    if x.ring != y.ring:
        raise IncompatibleRings(f"{x.ring} vs {y.ring}")
    s = x.ring.s
    return x.num * s**y.power == y.num * s**x.power


def localization_map(x, target):
    """Image of ``x`` in ``R[1/s] -> R[1/t]`` when ``s`` divides ``t``."""
    src = x.ring
    if src.base != target.base:
        raise IncompatibleRings(f"{src} and {target} localize different rings")
    cof = src.base.exact_divide(target.s, src.s)
    if cof is None:
        raise IncompatibleRings(f"{src.s} does not divide {target.s}")
    return LocalElement(target, x.num * cof**x.power, x.power)
