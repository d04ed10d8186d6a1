"""Exact winding numbers of polynomial plane loops and the map eta.

The degree of ``t -> (f1(t), f2(t))`` is computed by walking quadrants:
the real roots of ``f1`` and ``f2`` are isolated and separated, the sign
pair is read at one rational point in every root-free gap, and each change
of quadrant contributes a signed quarter turn.  Counterclockwise is
positive, so ``t -> (cos 2 pi t, sin 2 pi t)`` has winding number +1.
"""

from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import InternalInconsistency, OriginHit, PreconditionError
from .matrix import LoopRep, Mat2, Verdict, loop_power, verify_loop
from .poly import MultiPoly
from .rings import QQ
from .sturm import RootInterval, SturmPoly, int_coeffs, sign_at

# quadrant index by sign pair, counterclockwise from the open first quadrant
_QUADRANT = {(1, 1): 0, (-1, 1): 1, (-1, -1): 2, (1, -1): 3}


@dataclass(frozen=True)
class PlaneLoop:
    f1: MultiPoly
    f2: MultiPoly
    var: str = "T"

    def __post_init__(self):
        for f in (self.f1, self.f2):
            if f.ring != QQ:
                raise PreconditionError(f"plane loops need rational coefficients, got {f.ring}")
            if set(f.vars) - {self.var}:
                raise PreconditionError(f"{f} is not univariate in {self.var}")

    @classmethod
    def closed(cls, f1, f2, var="T"):
        """Build a loop, rejecting paths whose ends differ."""
        loop = cls(f1, f2, var)
        for f in (f1, f2):
            if f.subs({var: 0}) != f.subs({var: 1}):
                raise PreconditionError(f"{f} takes different values at {var}=0 and {var}=1")
        return loop

    @classmethod
    def first_column(cls, loop):
        return cls.closed(loop.matrix.e11, loop.matrix.e21, loop.loop_var)


@dataclass(frozen=True)
class NonvanishingCert:
    ok: bool
    sum_of_squares: MultiPoly
    root_count: int
    interval: RootInterval | None = None

    def __bool__(self):
        return self.ok


def nonvanishing_on_unit_interval(loop, lo=0, hi=1):
    """Certify that ``f1^2 + f2^2`` has no root in [lo, hi] (Sturm count)."""
    q = loop.f1 * loop.f1 + loop.f2 * loop.f2
    coeffs = int_coeffs(q, loop.var)
    if not coeffs:
        return NonvanishingCert(False, q, -1, RootInterval(mpq(lo), mpq(hi)))
    sp = SturmPoly(coeffs)
    n = sp.count_closed(mpq(lo), mpq(hi))
    if n == 0 and sp.sign(mpq(lo)) > 0:
        return NonvanishingCert(True, q, 0)
    ivs = sp.isolate(lo, hi)
    return NonvanishingCert(False, q, n, ivs[0] if ivs else None)


@dataclass
class WindingResult:
    winding: int
    quarter_turns: int
    itinerary: list = field(default_factory=list)  # (sample point, quadrant)


def _separate(items, width=None):
    """Refine root intervals of two polynomials until pairwise disjoint.

    ``items`` holds ``(interval, sturm_poly, other_sturm_poly)``.
    """
    for _ in range(100_000):
        items.sort(key=lambda it: (it[0].lo, it[0].hi))
        changed = False
        for k in range(len(items) - 1):
            (a, pa, qa), (b, pb, qb) = items[k], items[k + 1]
            if pa is pb:
                continue
            clash = max(a.lo, b.lo) < min(a.hi, b.hi)
            if a.exact or b.exact:
                clash = clash or a.hi >= b.lo
            if not clash:
                continue
            for iv, p, other in ((a, pa, qa), (b, pb, qb)):
                if iv.exact and other.sign(iv.lo) == 0:
                    raise OriginHit("both coordinates vanish at the same point", iv)
            if a.exact and b.exact:
                raise OriginHit("both coordinates vanish at the same point", a)
            if not a.exact:
                items[k] = (pa.refine(a), pa, qa)
            if not b.exact:
                items[k + 1] = (pb.refine(b), pb, qb)
            changed = True
            break
        if not changed:
            break
    else:
        raise InternalInconsistency("root intervals could not be separated")
    if width is not None:
        items = [(p.refine(iv, width=width, steps=0), p, q) for iv, p, q in items]
        items.sort(key=lambda it: (it[0].lo, it[0].hi))
    return items


def quadrant_itinerary(f1, f2, lo, hi, var="T", width=None):
    """Quadrant of ``(f1, f2)`` at one rational point in each root-free gap.

    Neither coordinate may vanish identically.  Consecutive samples are
    separated by exactly one root of ``f1`` or ``f2``.
    """
    lo, hi = mpq(lo), mpq(hi)
    c1, c2 = int_coeffs(f1, var), int_coeffs(f2, var)
    p1, p2 = SturmPoly(c1), SturmPoly(c2)
    items = [(iv, p1, p2) for iv in p1.isolate(lo, hi)]
    items += [(iv, p2, p1) for iv in p2.isolate(lo, hi)]
    items = _separate(items, width)
    bounds = [(lo, lo)] + [(iv.lo, iv.hi) for iv, _, _ in items] + [(hi, hi)]
    samples = []
    for (_, right), (left, _) in zip(bounds, bounds[1:]):
        if right == left and (right == lo or right == hi):
            continue
        t = right if right == left else (right + left) / 2
        s = (sign_at(c1, t), sign_at(c2, t))
        if 0 in s:
            raise InternalInconsistency(f"sample point {t} is a root")
        samples.append((t, _QUADRANT[s]))
    return samples


def quarter_turns(quadrants, closed=True):
    """Signed quarter turns along a quadrant sequence (circular if closed)."""
    total = 0
    n = len(quadrants)
    pairs = zip(quadrants, quadrants[1:] + (quadrants[:1] if closed else []))
    for a, b in pairs:
        d = (b - a) % 4
        if d == 2:
            raise InternalInconsistency("quadrant walk jumped across the origin")
        total += {0: 0, 1: 1, 3: -1}[d]
    if closed and n and total % 4:
        raise InternalInconsistency(f"quarter turns {total} not a multiple of 4")
    return total


def winding_details(loop, width=None, check=True):
    if check:
        cert = nonvanishing_on_unit_interval(loop)
        if not cert:
            raise OriginHit(f"loop passes through the origin near {cert.interval}", cert.interval)
    if not loop.f1 or not loop.f2:
        return WindingResult(0, 0, [])
    samples = quadrant_itinerary(loop.f1, loop.f2, 0, 1, loop.var, width)
    turns = quarter_turns([q for _, q in samples])
    return WindingResult(turns // 4, turns, samples)


def winding_number(loop, width=None):
    """Degree of a closed plane loop that avoids the origin."""
    return winding_details(loop, width).winding


def eta(loop):
    """Winding number of the first column of a loop over Q."""
    if loop.ring != QQ:
        raise PreconditionError(f"eta is defined for loops over Q, got {loop.ring}")
    if loop.parameters:
        raise PreconditionError(f"loop has parameters {sorted(loop.parameters)}")
    verify_loop(loop.matrix, loop.loop_var)
    return winding_number(PlaneLoop.first_column(loop))


# -- the generator ---------------------------------------------------------
# As printed, the lower-right factor reads 24T^2-24T-1 and the determinant
# is not 1.  Keeping the first column and the shape of the second column,
# the unique determinant-one completion changes that constant to +1.
PRINTED_GENERATOR_ENTRIES = (
    "1 + 4*T*(1-T)*(T^2-T-1)",
    "T*(1-T)*(2*T-1)*(24*T^2-24*T-29)",
    "4*T*(1-T)*(2*T-1)",
    "1 + 4*T*(1-T)*(24*T^2-24*T-1)",
)
GENERATOR_ENTRIES = PRINTED_GENERATOR_ENTRIES[:3] + ("1 + 4*T*(1-T)*(24*T^2-24*T+1)",)
CLAIMED_GENERATOR_WINDING = 1


def generator_matrix(printed=False, loop_var="T"):
    from .expr import parse_poly

    src = PRINTED_GENERATOR_ENTRIES if printed else GENERATOR_ENTRIES
    return Mat2(*(parse_poly(s, QQ).rename({"T": loop_var}) for s in src))


def generator_loop(loop_var="T"):
    """The explicit generator matrix (corrected entry), checked to be a loop."""
    return verify_loop(generator_matrix(False, loop_var), loop_var)


def generator_power(k, loop_var="T"):
    return loop_power(generator_loop(loop_var), k)


def complex_power_path(k, var="T"):
    """``((1 - t) + t i)^k`` as a pair of real polynomials."""
    t = MultiPoly.var(QQ, var)
    re, im = MultiPoly.one(QQ), MultiPoly.zero(QQ)
    a, b = 1 - t, t
    for _ in range(k):
        re, im = re * a - im * b, re * b + im * a
    return re, im


# -- free homotopy between the matrix product and the complex product -----
@dataclass
class FreeHomotopy:
    h1: MultiPoly
    h2: MultiPoly
    var: str
    param: str
    verdict: Verdict

    def at(self, s):
        return PlaneLoop(self.h1.subs({self.param: s}), self.h2.subs({self.param: s}), self.var)


def free_homotopy_H(a, b, param="s"):
    """Pair ``H(t, s)`` deforming the complex product of first columns
    (``s = 0``) into the first column of ``a * b`` (``s = 1``).

    The returned verdict records the symbolic identity
    ``f1*H2 - f2*H1 == (s + (1 - s)(f1^2 + f2^2)) * f2'`` and both boundaries.
    """
    if a.loop_var != b.loop_var:
        raise PreconditionError("loops use different variables")
    if param in a.matrix.vars or param in b.matrix.vars:
        raise PreconditionError(f"homotopy parameter {param!r} already occurs in the loops")
    (f1, g1), (f2, g2) = a.matrix.rows
    (h1, _), (h2, _) = b.matrix.rows
    s = MultiPoly.var(a.ring, param)
    H1 = f1 * h1 + (s * g1 - (1 - s) * f2) * h2
    H2 = f2 * h1 + (s * g2 + (1 - s) * f1) * h2
    bad = []
    lhs = f1 * H2 - f2 * H1
    rhs = (s + (1 - s) * (f1 * f1 + f2 * f2)) * h2
    if lhs != rhs:
        bad.append("key identity f1*H2 - f2*H1 = (s + (1-s)(f1^2+f2^2)) f2' fails")
    F1 = (f1 * h1 + g1 * h2, f2 * h1 + g2 * h2)
    F2 = (f1 * h1 - f2 * h2, f2 * h1 + f1 * h2)
    if (H1.subs({param: 1}), H2.subs({param: 1})) != F1:
        bad.append("H(t, 1) is not the first column of the matrix product")
    if (H1.subs({param: 0}), H2.subs({param: 0})) != F2:
        bad.append("H(t, 0) is not the complex product of the first columns")
    t = a.loop_var
    if (H1.subs({t: 0}), H2.subs({t: 0})) != (H1.subs({t: 1}), H2.subs({t: 1})):
        bad.append("H(0, s) differs from H(1, s)")
    if bad:
        raise InternalInconsistency("; ".join(bad))
    return FreeHomotopy(H1, H2, t, param, Verdict(True, []))


def identity_loop(loop_var="T"):
    return LoopRep.constant(QQ, loop_var)
