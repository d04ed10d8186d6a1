"""Explicit homotopies between polynomial loops.

Every constructor returns only after its output passed the matching
verifier, so a returned certificate is a checked witness.
"""

from dataclasses import dataclass, field

from .errors import (
    DecompositionMismatch,
    InternalInconsistency,
    NotAUnit,
    NotCongruent,
    NotSpecial,
    PreconditionError,
    WrongLift,
)
from .expr import join_product_poly, split_product_poly
from .matrix import (
    E12,
    E21,
    HomotopyCert,
    LoopRep,
    Mat2,
    check_loop,
    matprod,
    sl2_inverse,
    verify_homotopy,
    verify_loop,
)
from .poly import MultiPoly
from .rings import QQ, DualNumbers, Product, nilradical_reduce


def _fresh(var, *mats):
    for m in mats:
        if var in m.vars:
            raise PreconditionError(f"variable {var!r} is not fresh")


def _require(cert):
    v = verify_homotopy(cert)
    if not v:
        raise InternalInconsistency("constructed homotopy failed verification: " + "; ".join(v.violations))
    return cert


# -- evaluation at a parameter --------------------------------------------
def eval_loop_at(a, value, param="X"):
    """Substitute ``param -> value`` and revalidate the loop."""
    if param not in a.parameters:
        if param == a.loop_var:
            raise PreconditionError(f"{param} is the loop variable, not a parameter")
        return a
    return verify_loop(a.matrix.subs({param: value}), a.loop_var)


def polyring_injectivity_homotopy(a, b, theta, param="X", new_var="W"):
    """``M = a(X(1-W)) * theta(T, 1-W)^-1 * b(XW)`` joining ``a`` (W=0) to ``b`` (W=1).

    ``theta`` must join ``a`` at X=0 to ``b`` at X=0.
    """
    t = a.loop_var
    if b.loop_var != t or theta.loop_var != t:
        raise PreconditionError("loop variables differ")
    bad = list(verify_homotopy(theta).violations)
    a0, b0 = a.matrix.subs({param: 0}), b.matrix.subs({param: 0})
    if theta.start.matrix != a0:
        bad.append("theta does not start at a with the parameter set to 0")
    if theta.end.matrix != b0:
        bad.append("theta does not end at b with the parameter set to 0")
    if theta.matrix.vars - {t, theta.homotopy_var}:
        bad.append("theta depends on variables other than the loop and homotopy variables")
    if bad:
        raise PreconditionError("invalid theta: " + "; ".join(bad), bad)
    _fresh(new_var, a.matrix, b.matrix)
    x, w = MultiPoly.var(a.ring, param), MultiPoly.var(a.ring, new_var)
    left = a.matrix.subs({param: x * (1 - w)})
    mid = sl2_inverse(theta.matrix.subs({theta.homotopy_var: 1 - w}))
    right = b.matrix.subs({param: x * w})
    return _require(HomotopyCert(left @ mid @ right, a, b, new_var))


# -- nilpotent helpers ------------------------------------------------------
def reduce_mod_nil(m):
    """Entrywise image of a matrix over DualNumbers in the rationals."""
    return m.map(lambda e: e.map_coeffs(nilradical_reduce, QQ))


def lift_matrix(m, ring):
    return m.map(lambda e: e.map_coeffs(ring.coerce, ring))


def is_nilpotent(p):
    return all(not nilradical_reduce(c) for c in p.terms.values())


def nil_unit_inverse(u):
    """Inverse of ``1 + n`` with ``n`` nilpotent (finite geometric series)."""
    n = u - 1
    if not is_nilpotent(n):
        raise NotAUnit(f"{u} is not 1 plus a nilpotent", obstruction="reduction is not 1")
    total = power = MultiPoly.one(u.ring)
    for _ in range(u.ring.order + 1):
        power = power * (-n)
        if not power:
            return total
        total = total + power
    raise InternalInconsistency("nilpotent series did not terminate")


def _check_congruent(m):
    if not isinstance(m.ring, DualNumbers):
        raise PreconditionError(f"expected a matrix over dual numbers, got {m.ring}")
    if not reduce_mod_nil(m).is_identity():
        raise NotCongruent(f"{m} is not the identity modulo eps")
    if m.det() != 1:
        raise NotSpecial(f"determinant is {m.det()}, not 1")


# -- elementary factorization mod nilpotents -------------------------------
@dataclass(frozen=True)
class ElemFactorization:
    """Ordered elementary factors whose product is ``target``."""

    factors: tuple  # ((kind, argument), ...)
    target: Mat2
    variant: str = "transposed"
    nil: dict = field(default_factory=dict, compare=False)  # c1..c5

    def matrices(self):
        return [E12(p, self.target.ring) if k == "E12" else E21(p, self.target.ring) for k, p in self.factors]

    def product(self):
        return matprod(self.matrices(), self.target.ring)


VARIANTS = ("verbatim", "transposed")


def factor_candidates(alpha, variant):
    """Six factors for ``alpha = [[1+a1, a3], [a2, 1+a4]]``.

    ``verbatim`` takes the first two arguments as printed
    (``(1+a4)^-1 a2`` and ``x^-1 a3``); ``transposed`` swaps a2 and a3.
    """
    ring = alpha.ring
    a1, a3, a2, a4 = alpha.e11 - 1, alpha.e12, alpha.e21, alpha.e22 - 1
    inv = nil_unit_inverse(1 + a4)
    x = (1 + a1) - inv * a2 * a3
    xinv = nil_unit_inverse(x)
    if variant == "verbatim":
        c1, c2 = inv * a2, xinv * a3
    elif variant == "transposed":
        c1, c2 = inv * a3, xinv * a2
    else:
        raise ValueError(f"unknown variant {variant!r}")
    one = MultiPoly.one(ring)
    factors = (("E12", c1), ("E21", c2), ("E12", -x), ("E21", a4), ("E12", one), ("E21", x - 1))
    nil = {"c1": c1, "c2": c2, "c3": 1 - x, "c4": a4, "c5": x - 1}
    return ElemFactorization(factors, alpha, variant, nil)


def variant_outcomes(alpha):
    """Which variants multiply back to ``alpha``."""
    _check_congruent(alpha)
    return {v: factor_candidates(alpha, v).product() == alpha for v in VARIANTS}


def elementary_decomposition(alpha, variant=None):
    """Factor ``alpha`` (identity mod eps) into six elementary matrices.

    Without ``variant`` the printed argument order is tried first and the
    a2/a3 swap second; the first one whose product equals ``alpha`` wins.
    """
    _check_congruent(alpha)
    last = None
    for v in (variant,) if variant else VARIANTS:
        fac = factor_candidates(alpha, v)
        got = fac.product()
        if got == alpha:
            if not all(is_nilpotent(c) for c in fac.nil.values()):
                raise InternalInconsistency("factor arguments are not nilpotent")
            return fac
        last = got
    raise DecompositionMismatch("elementary factors do not multiply back", alpha, last)


def connect_to_identity(alpha, new_var="X", variant=None):
    """``beta(X)`` with every nilpotent argument scaled by ``X``:
    beta(0) = I, beta(1) = alpha, beta = I mod eps."""
    _fresh(new_var, alpha)
    fac = elementary_decomposition(alpha, variant)
    beta = _scaled_product(fac, MultiPoly.var(alpha.ring, new_var))
    bad = []
    if not beta.subs({new_var: 0}).is_identity():
        bad.append("beta(0) is not the identity")
    if beta.subs({new_var: 1}) != alpha:
        bad.append("beta(1) differs from alpha")
    if not reduce_mod_nil(beta).is_identity():
        bad.append("beta is not the identity mod eps")
    if beta.det() != 1:
        bad.append("det beta is not 1")
    if bad:
        raise InternalInconsistency("; ".join(bad))
    return beta


def _scaled_product(fac, s):
    n = fac.nil
    ring = fac.target.ring
    return matprod(
        [
            E12(n["c1"] * s, ring),
            E21(n["c2"] * s, ring),
            E12(n["c3"] * s - 1, ring),
            E21(n["c4"] * s, ring),
            E12(1, ring),
            E21(n["c5"] * s, ring),
        ]
    )


def contract_nil_loop(a, new_var="T", variant=None):
    """Contract a loop that is the identity mod eps: certificate from the
    identity (``new_var = 0``) to ``a`` (``new_var = 1``)."""
    verify_loop(a.matrix, a.loop_var)
    _check_congruent(a.matrix)
    _fresh(new_var, a.matrix)
    fac = elementary_decomposition(a.matrix, variant)
    x = a.loop_var
    for name, h in fac.nil.items():
        if h.subs({x: 0}) or h.subs({x: 1}):
            raise InternalInconsistency(f"{name} does not vanish at {x} = 0 and {x} = 1")
    beta = _scaled_product(fac, MultiPoly.var(a.ring, new_var))
    ident = LoopRep.constant(a.ring, x)
    return _require(HomotopyCert(beta, ident, a, new_var))


# -- lifting modulo the nilradical ----------------------------------------
def lift_loop_mod_nil(beta_bar, target, chosen_lift):
    """A loop over ``target`` reducing to ``beta_bar``.

    The chosen lift has det ``1 + lambda``; the first column is scaled by
    ``(1 + lambda)^-1`` and the endpoints are corrected with
    ``theta1(1-X)^-1 * alpha(X) * theta2(X)^-1``.
    """
    x = beta_bar.loop_var
    if chosen_lift.ring != target:
        raise WrongLift(f"lift is over {chosen_lift.ring}, expected {target}")
    if reduce_mod_nil(chosen_lift) != beta_bar.matrix:
        raise WrongLift("chosen lift does not reduce to the given loop")
    lam_inv = nil_unit_inverse(chosen_lift.det())
    m = chosen_lift
    alpha = Mat2(lam_inv * m.e11, m.e12, lam_inv * m.e21, m.e22)
    if alpha.det() != 1:
        raise InternalInconsistency("column scaling did not fix the determinant")
    theta1 = connect_to_identity(alpha.subs({x: 0}), x)
    theta2 = connect_to_identity(alpha.subs({x: 1}), x)
    xv = MultiPoly.var(target, x)
    gamma = sl2_inverse(theta1.subs({x: 1 - xv})) @ alpha @ sl2_inverse(theta2)
    bad = check_loop(gamma, x)
    if reduce_mod_nil(gamma) != beta_bar.matrix:
        bad.append("lift does not reduce to the given loop")
    if bad:
        raise InternalInconsistency("; ".join(bad))
    return LoopRep(gamma, x)


def kernel_contraction(a, beta, new_var="T"):
    """Certificate from ``a`` (T=0) to the identity (T=1) given a lift
    ``beta(X, T)`` of a contraction of ``a`` mod eps."""
    x, t = a.loop_var, new_var
    bad = []
    if beta.ring != a.ring:
        bad.append(f"beta is over {beta.ring}, a over {a.ring}")
    if beta.vars - {x, t}:
        bad.append(f"beta has extra variables {sorted(beta.vars - {x, t})}")
    if bad:
        raise PreconditionError("; ".join(bad), bad)
    for v in (0, 1):
        if not beta.subs({x: v}).is_identity():
            bad.append(f"beta({v}, {t}) is not the identity")
    if beta.det() != 1:
        bad.append("det beta is not 1")
    d1 = beta.subs({t: 0}) @ sl2_inverse(a.matrix)
    d2 = beta.subs({t: 1})
    for name, d in (("beta(X,0) a^-1", d1), ("beta(X,1)", d2)):
        if not reduce_mod_nil(d).is_identity():
            bad.append(f"{name} is not the identity mod eps")
        bad += [f"{name}: {v}" for v in check_loop(d, x)]
    if bad:
        raise PreconditionError("kernel contraction preconditions: " + "; ".join(bad), bad)
    g1 = contract_nil_loop(LoopRep(d1, x), t).matrix
    g2 = contract_nil_loop(LoopRep(d2, x), t).matrix
    tv = MultiPoly.var(a.ring, t)
    big = sl2_inverse(g1.subs({t: 1 - tv})) @ beta @ sl2_inverse(g2)
    return _require(HomotopyCert(big, a, LoopRep.constant(a.ring, x), t))


# -- graded rings -----------------------------------------------------------
def swan_weibel_map(p, new_var="T", graded=None):
    """Multiply each homogeneous piece of degree d by ``new_var^d``.

    ``graded`` lists the graded variables (default: all of them).
    """
    if new_var in p.vars:
        raise PreconditionError(f"{new_var!r} already occurs in {p}")
    graded = set(p.vars if graded is None else graded)
    idx = [i for i, v in enumerate(p.vars) if v in graded]
    vs = tuple(sorted(p.vars + (new_var,)))
    pos = vs.index(new_var)
    terms = {}
    for e, c in p.terms.items():
        d = sum(e[i] for i in idx)
        terms[e[:pos] + (d,) + e[pos:]] = c
    return MultiPoly(p.ring, vs, terms)


def normalized_loop_shape(a):
    """``f_i`` with entries ``1 + X(X-1) f1``, ``X(X-1) f3``, ``X(X-1) f2``, ``1 + X(X-1) f4``."""
    x = MultiPoly.var(a.ring, a.loop_var)
    q = x * (x - 1)
    out = []
    for e, diag in zip(a.matrix.entries, (True, False, False, True)):
        f = (e - 1 if diag else e).exact_div(q)
        if f is None:
            raise PreconditionError(f"{e} does not have the loop shape")
        out.append(f)
    return tuple(out)


def graded_homotopy(b, new_var="T"):
    """Deform ``b`` to its degree-0 part ``beta0`` (T=0 end).

    Returns ``(certificate, beta0)``; the certificate runs from beta0 to b.
    """
    _fresh(new_var, b.matrix)
    normalized_loop_shape(b)
    graded = b.parameters
    g = b.matrix.map(lambda e: swan_weibel_map(e, new_var, graded))
    beta0 = verify_loop(g.subs({new_var: 0}), b.loop_var)
    return _require(HomotopyCert(g, beta0, b, new_var)), beta0


# -- product rings ------------------------------------------------------------
def product_split(a):
    if not isinstance(a.ring, Product):
        raise PreconditionError(f"expected a loop over a product ring, got {a.ring}")
    halves = [split_product_poly(e) for e in a.matrix.entries]
    left = verify_loop(Mat2(*(h[0] for h in halves)), a.loop_var)
    right = verify_loop(Mat2(*(h[1] for h in halves)), a.loop_var)
    return left, right


def product_join(left, right):
    if left.loop_var != right.loop_var:
        raise PreconditionError("loop variables differ")
    ring = Product(left.ring, right.ring)
    ents = [join_product_poly(ring, l, r) for l, r in zip(left.matrix.entries, right.matrix.entries)]
    return verify_loop(Mat2(*ents), left.loop_var)


# -- basepoint shift ------------------------------------------------------------
def basepoint_shift_homotopy(a, param="X", new_var="S"):
    """Substitute ``X -> (X-1)S + 1``: S=0 gives ``a`` at X=1, S=1 gives ``a``."""
    _fresh(new_var, a.matrix)
    if param == a.loop_var:
        raise PreconditionError(f"{param} is the loop variable")
    x, s = MultiPoly.var(a.ring, param), MultiPoly.var(a.ring, new_var)
    m = a.matrix.subs({param: (x - 1) * s + 1})
    return _require(HomotopyCert(m, eval_loop_at(a, 1, param), a, new_var))
