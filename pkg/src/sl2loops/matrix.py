"""2x2 polynomial matrices, loops in SL2 and homotopy certificates."""

from dataclasses import dataclass, field

from .errors import IncompatibleRings, LoopRejected, NotSpecial
from .poly import MultiPoly, poly


@dataclass(frozen=True)
class Mat2:
    e11: MultiPoly
    e12: MultiPoly
    e21: MultiPoly
    e22: MultiPoly

    def __post_init__(self):
        r = self.e11.ring
        for e in (self.e12, self.e21, self.e22):
            if e.ring != r:
                raise IncompatibleRings(f"matrix entries over {r} and {e.ring}")

    @classmethod
    def of(cls, ring, rows):
        (a, b), (c, d) = rows
        return cls(poly(ring, a), poly(ring, b), poly(ring, c), poly(ring, d))

    @classmethod
    def identity(cls, ring):
        one, zero = MultiPoly.one(ring), MultiPoly.zero(ring)
        return cls(one, zero, zero, one)

    @property
    def ring(self):
        return self.e11.ring

    @property
    def entries(self):
        return (self.e11, self.e12, self.e21, self.e22)

    @property
    def rows(self):
        return ((self.e11, self.e12), (self.e21, self.e22))

    @property
    def vars(self):
        vs = set()
        for e in self.entries:
            vs.update(e.vars)
        return vs

    def column(self, j=0):
        return (self.e11, self.e21) if j == 0 else (self.e12, self.e22)

    def __matmul__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        a, b, c, d = self.entries
        e, f, g, h = o.entries
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    __mul__ = __matmul__

    def apply(self, col):
        x, y = col
        return (self.e11 * x + self.e12 * y, self.e21 * x + self.e22 * y)

    def det(self):
        return self.e11 * self.e22 - self.e12 * self.e21

    def adjugate(self):
        return Mat2(self.e22, -self.e12, -self.e21, self.e11)

    def subs(self, bindings):
        return Mat2(*(e.subs(bindings) for e in self.entries))

    def map(self, fn):
        return Mat2(*(fn(e) for e in self.entries))

    def is_identity(self):
        return self.e11 == 1 and self.e22 == 1 and not self.e12 and not self.e21

    def __str__(self):
        return "[[{}, {}], [{}, {}]]".format(*self.entries)


def det2(m):
    return m.det()


def sl2_inverse(m):
    """Adjugate of a determinant-one matrix."""
    if m.det() != 1:
        raise NotSpecial(f"determinant is {m.det()}, not 1")
    return m.adjugate()


def elementary(kind, p, ring=None):
    """``E12(p) = [[1, p], [0, 1]]`` or ``E21(p) = [[1, 0], [p, 1]]``."""
    if ring is None:
        ring = p.ring
    p = poly(ring, p)
    one, zero = MultiPoly.one(ring), MultiPoly.zero(ring)
    if kind == "E12":
        return Mat2(one, p, zero, one)
    if kind == "E21":
        return Mat2(one, zero, p, one)
    raise ValueError(f"unknown elementary kind {kind!r}")


def E12(p, ring=None):
    return elementary("E12", p, ring)


def E21(p, ring=None):
    return elementary("E21", p, ring)


def matprod(mats, ring=None):
    mats = list(mats)
    if not mats:
        return Mat2.identity(ring)
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


@dataclass(frozen=True)
class Verdict:
    """Outcome of a symbolic check; falsy when anything was violated."""

    ok: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.ok


def check_loop(m, loop_var="T"):
    """Violated loop conditions of ``m`` (empty list means a valid loop)."""
    out = []
    d = m.det()
    if d != 1:
        out.append(f"determinant is {d}, not 1")
    if not m.subs({loop_var: 0}).is_identity():
        out.append(f"value at {loop_var}=0 is {m.subs({loop_var: 0})}, not the identity")
    if not m.subs({loop_var: 1}).is_identity():
        out.append(f"value at {loop_var}=1 is {m.subs({loop_var: 1})}, not the identity")
    return out


@dataclass(frozen=True)
class LoopRep:
    """A validated loop: det 1 and identity at both ends of ``loop_var``.

    Variables other than ``loop_var`` are parameters (constants of a
    polynomial ring tower such as R[X]).
    """

    matrix: Mat2
    loop_var: str = "T"

    @property
    def ring(self):
        return self.matrix.ring

    @property
    def parameters(self):
        return frozenset(self.matrix.vars - {self.loop_var})

    @classmethod
    def constant(cls, ring, loop_var="T"):
        return cls(Mat2.identity(ring), loop_var)


def verify_loop(m, loop_var="T"):
    """Validate ``m`` as a loop; raise :class:`LoopRejected` listing every violation."""
    bad = check_loop(m, loop_var)
    if bad:
        raise LoopRejected("not a loop: " + "; ".join(bad), bad)
    return LoopRep(m, loop_var)


@dataclass(frozen=True)
class HomotopyCert:
    """``matrix(loop_var, homotopy_var)`` claimed to join ``start`` to ``end``."""

    matrix: Mat2
    start: LoopRep
    end: LoopRep
    homotopy_var: str = "S"

    @property
    def loop_var(self):
        return self.start.loop_var


def verify_homotopy(cert):
    """Check det = 1 and the four boundary identities symbolically."""
    m, t, s = cert.matrix, cert.loop_var, cert.homotopy_var
    bad = []
    if cert.end.loop_var != t:
        bad.append(f"start and end use different loop variables ({t}, {cert.end.loop_var})")
    if t == s:
        bad.append("loop and homotopy variables coincide")
    d = m.det()
    if d != 1:
        bad.append(f"determinant is {d}, not 1")
    at0 = m.subs({s: 0})
    if at0 != cert.start.matrix:
        bad.append(f"{s}=0 boundary {at0} differs from start {cert.start.matrix}")
    at1 = m.subs({s: 1})
    if at1 != cert.end.matrix:
        bad.append(f"{s}=1 boundary {at1} differs from end {cert.end.matrix}")
    for v in (0, 1):
        b = m.subs({t: v})
        if not b.is_identity():
            bad.append(f"{t}={v} boundary is {b}, not the identity")
    return Verdict(not bad, bad)


def constant_homotopy(loop, homotopy_var="S"):
    return HomotopyCert(loop.matrix, loop, loop, homotopy_var)


def loop_product(a, b):
    if a.ring != b.ring:
        raise IncompatibleRings(f"loops over {a.ring} and {b.ring}")
    if a.loop_var != b.loop_var:
        raise IncompatibleRings(f"loop variables {a.loop_var} and {b.loop_var} differ")
    return verify_loop(a.matrix @ b.matrix, a.loop_var)


def loop_inverse(a):
    return LoopRep(sl2_inverse(a.matrix), a.loop_var)


def loop_power(a, k):
    if k < 0:
        a, k = loop_inverse(a), -k
    out = LoopRep.constant(a.ring, a.loop_var)
    for _ in range(k):
        out = LoopRep(out.matrix @ a.matrix, a.loop_var)
    return out
