"""Exact coefficient rings.

A ring is described by a small frozen dataclass (the *descriptor*); its
elements are plain Python values that support ``+ - *`` and truthiness:

============== ==========================================
descriptor     element type
============== ==========================================
Integers       ``int``
Rationals      ``gmpy2.mpq``
DualNumbers(k) :class:`Dual` (``k`` coefficients of 1, eps, ...)
Product(R, S)  :class:`Pair`
============== ==========================================

Polynomial rings, quotients and localizations live in
:mod:`sl2loops.polyrings` because their elements are polynomials.
Every element is kept in a canonical form, so ``==`` is ring equality.
"""

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq, mpz

from .errors import IncompatibleRings, NotAUnit

_INT_TYPES = (int, type(mpz(0)))
_MPQ = type(mpq(0))


class Ring:
    """Shared behaviour of ring descriptors."""

    kind = "ring"
    is_domain = False
    gens = ()

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def coerce(self, value):
        raise NotImplementedError

    def contains(self, value):
        try:
            return self.coerce(value) == value
        except IncompatibleRings:
            return False

    def gen(self, name):
        raise IncompatibleRings(f"{self} has no generator named {name!r}")

    def invert(self, x):
        raise NotImplementedError

    def is_unit(self, x):
        try:
            self.invert(x)
        except NotAUnit:
            return False
        return True

    def exact_divide(self, a, b):
        """``q`` with ``b*q == a``, or ``None`` when ``b`` does not divide ``a``."""
        raise NotImplementedError

    def expand(self, x):
        """``x`` as a list of ``(rational, {generator: exponent})`` terms."""
        raise IncompatibleRings(f"elements of {self} have no expression form")


def as_mpq(value):
    if isinstance(value, _MPQ):
        return value
    if isinstance(value, (bool,)):
        return mpq(int(value))
    if isinstance(value, _INT_TYPES):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    raise IncompatibleRings(f"cannot read {value!r} as a rational")


@dataclass(frozen=True)
class Integers(Ring):
    kind = "integers"
    is_domain = True

    def coerce(self, value):
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, _INT_TYPES):
            return int(value)
        if isinstance(value, (_MPQ, Fraction)) and value.denominator == 1:
            return int(value.numerator)
        raise IncompatibleRings(f"{value!r} is not an integer")

    def invert(self, x):
        if x in (1, -1):
            return x
        raise NotAUnit(f"{x} is not a unit in Z", obstruction="only +1 and -1 are units")

    def exact_divide(self, a, b):
        if b == 0:
            return None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def expand(self, x):
        return [(mpq(x), {})] if x else []

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class Rationals(Ring):
    kind = "rationals"
    is_domain = True

    def coerce(self, value):
        return as_mpq(value)

    def invert(self, x):
        if not x:
            raise NotAUnit("0 is not invertible", obstruction="zero")
        return 1 / x

    def exact_divide(self, a, b):
        return a / b if b else None

    def expand(self, x):
        return [(x, {})] if x else []

    def __str__(self):
        return "Q"


QQ = Rationals()
ZZ = Integers()


class Dual:
    """Element ``c0 + c1*eps + ... + c_{k-1}*eps^(k-1)`` of Q[eps]/(eps^k)."""

    __slots__ = ("ring", "c")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.c = coeffs

    def _other(self, other):
        if isinstance(other, Dual):
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
        return Dual(self.ring, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Dual(self.ring, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Dual(self.ring, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        k = len(a)
        out = [mpq(0)] * k
        for i in range(k):
            ai = a[i]
            if not ai:
                continue
            for j in range(k - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return Dual(self.ring, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.ring.invert(self) ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Dual):
            return self.ring == other.ring and self.c == other.c
        try:
            return self.c == self.ring.coerce(other).c
        except IncompatibleRings:
            return NotImplemented

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        parts = [str(self.c[0])]
        for i, x in enumerate(self.c[1:], 1):
            if x:
                parts.append(f"{x}*eps^{i}")
        return f"Dual({' + '.join(parts)})"


@dataclass(frozen=True)
class DualNumbers(Ring):
    """Q[eps]/(eps^order), the stand-in for a ring with nonzero nilradical."""

    order: int = 2
    kind = "dual"

    def __post_init__(self):
        if int(self.order) < 2:
            raise ValueError("dual number order must be at least 2")

    @property
    def gens(self):
        return ("eps",)

    def coerce(self, value):
        if isinstance(value, Dual):
            if value.ring != self:
                raise IncompatibleRings(f"{value.ring} vs {self}")
            return value
        q = as_mpq(value)
        return Dual(self, (q,) + (mpq(0),) * (self.order - 1))

    def make(self, coeffs):
        coeffs = [as_mpq(c) for c in coeffs]
        if len(coeffs) > self.order:
            coeffs = coeffs[: self.order]
        coeffs += [mpq(0)] * (self.order - len(coeffs))
        return Dual(self, tuple(coeffs))

    def gen(self, name):
        if name != "eps":
            return super().gen(name)
        return self.make([0, 1])

    @property
    def eps(self):
        return self.make([0, 1])

    def invert(self, x):
        x = self.coerce(x)
        c0 = x.c[0]
        if not c0:
            raise NotAUnit(f"{x} is not a unit", obstruction="constant term is zero")
        # x = c0 (1 + n) with n nilpotent: truncated geometric series.
        n = Dual(self, (mpq(0),) + tuple(ci / c0 for ci in x.c[1:]))
        total = self.one()
        power = self.one()
        for _ in range(1, self.order):
            power = power * (-n)
            total = total + power
        return total * (1 / c0)

    def exact_divide(self, a, b):
        try:
            return a * self.invert(b)
        except NotAUnit:
            return None

    def expand(self, x):
        return [(c, {"eps": i} if i else {}) for i, c in enumerate(x.c) if c]

    def reduce(self, x):
        """Image in the quotient by the nilradical, i.e. the constant term."""
        return self.coerce(x).c[0]

    def __str__(self):
        return f"Q[eps]/(eps^{self.order})"


def nilradical_reduce(x):
    """Constant term of a dual number: its image modulo the nilradical."""
    if not isinstance(x, Dual):
        raise IncompatibleRings(f"{x!r} is not a dual number")
    return x.c[0]


class Pair:
    __slots__ = ("ring", "left", "right")

    def __init__(self, ring, left, right):
        self.ring = ring
        self.left = left
        self.right = right

    def _other(self, other):
        if isinstance(other, Pair):
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
        return Pair(self.ring, self.left + o.left, self.right + o.right)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Pair(self.ring, self.left - o.left, self.right - o.right)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Pair(self.ring, -self.left, -self.right)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Pair(self.ring, self.left * o.left, self.right * o.right)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Pair):
            try:
                other = self.ring.coerce(other)
            except IncompatibleRings:
                return NotImplemented
        return self.ring == other.ring and self.left == other.left and self.right == other.right

    def __hash__(self):
        return hash((self.left, self.right))

    def __bool__(self):
        return bool(self.left) or bool(self.right)

    def __repr__(self):
        return f"Pair({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Product(Ring):
    left: Ring
    right: Ring
    kind = "product"

    def coerce(self, value):
        if isinstance(value, Pair):
            if value.ring != self:
                raise IncompatibleRings(f"{value.ring} vs {self}")
            return value
        return Pair(self, self.left.coerce(value), self.right.coerce(value))

    def pair(self, left, right):
        return Pair(self, self.left.coerce(left), self.right.coerce(right))

    def invert(self, x):
        x = self.coerce(x)
        return Pair(self, self.left.invert(x.left), self.right.invert(x.right))

    def exact_divide(self, a, b):
        ql = self.left.exact_divide(a.left, b.left)
        qr = self.right.exact_divide(a.right, b.right)
        if ql is None or qr is None:
            return None
        return Pair(self, ql, qr)

    def __str__(self):
        return f"({self.left} x {self.right})"


def ring_arith(op, x, y, ring=None):
    """Apply ``op`` in {add, sub, mul, neg} to ring elements.

    With ``ring`` given both operands must already belong to it; otherwise the
    element types decide.  Mixing elements of different rings raises
    :class:`IncompatibleRings`.
    """
    if ring is not None:
        for v in (x, y) if op != "neg" else (x,):
            if not _belongs(ring, v):
                raise IncompatibleRings(f"{v!r} is not an element of {ring}")
    rx = getattr(x, "ring", None)
    ry = getattr(y, "ring", None)
    if rx is not None and ry is not None and op != "neg" and rx != ry:
        raise IncompatibleRings(f"{rx} vs {ry}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown ring operation {op!r}")


def _belongs(ring, v):
    r = getattr(v, "ring", None)
    if isinstance(v, (Dual, Pair)) or type(v).__name__ in ("QuotientElement", "LocalElement"):
        return r == ring
    try:
        ring.coerce(v)
    except IncompatibleRings:
        return False
    return True


def invert_unit(x, ring=None):
    """Multiplicative inverse; raises :class:`NotAUnit` with the obstruction."""
    if ring is None:
        ring = getattr(x, "ring", None)
        if ring is None:
            ring = ZZ if isinstance(x, _INT_TYPES) else QQ
    return ring.invert(x)
