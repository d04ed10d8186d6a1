import pytest
from gmpy2 import mpq

from helpers import congruent_matrix, rand_dual, rand_q, vanishing
from sl2loops.errors import (
    DecompositionMismatch,
    NotCongruent,
    PreconditionError,
    WrongLift,
)
from sl2loops.expr import parse_poly
from sl2loops.matrix import (
    E12,
    E21,
    HomotopyCert,
    LoopRep,
    Mat2,
    check_loop,
    constant_homotopy,
    verify_homotopy,
    verify_loop,
)
from sl2loops.poly import MultiPoly
from sl2loops.rings import QQ, DualNumbers, Product
from sl2loops.homotopy import (
    basepoint_shift_homotopy,
    connect_to_identity,
    contract_nil_loop,
    elementary_decomposition,
    eval_loop_at,
    graded_homotopy,
    kernel_contraction,
    lift_loop_mod_nil,
    normalized_loop_shape,
    polyring_injectivity_homotopy,
    product_join,
    product_split,
    reduce_mod_nil,
    swan_weibel_map,
    variant_outcomes,
)

D2, D3, D4 = DualNumbers(2), DualNumbers(3), DualNumbers(4)


def P(text, ring=QQ):
    return parse_poly(text, ring)


# -- evaluation and the injectivity homotopy --------------------------------
def test_eval_loop_at():
    a = verify_loop(E12(P("X*T*(T-1)")))
    assert eval_loop_at(a, 0).matrix.is_identity()
    assert eval_loop_at(a, 1).matrix == E12(P("T*(T-1)"))
    b = verify_loop(E12(P("T*(T-1)")))
    assert eval_loop_at(b, 0) is b


def test_injectivity_same_loop():
    a = verify_loop(E12(P("X*T*(T-1)")) @ E21(P("X^2*T^2*(T-1)")))
    theta = constant_homotopy(eval_loop_at(a, 0), "S")
    cert = polyring_injectivity_homotopy(a, a, theta)
    assert verify_homotopy(cert).ok
    assert cert.start == a and cert.end == a


def test_injectivity_reparametrized():
    a = verify_loop(E12(P("X*T*(T-1)")))
    b = verify_loop(a.matrix.subs({"X": P("X^2")}))
    cert = polyring_injectivity_homotopy(a, b, constant_homotopy(eval_loop_at(a, 0)))
    assert verify_homotopy(cert).ok


def test_injectivity_corrupted_theta():
    a = verify_loop(E12(P("X*T*(T-1)")))
    base = eval_loop_at(a, 0)
    bad_end = LoopRep(E12(P("T*(T-1)")), "T")
    theta = HomotopyCert(base.matrix, base, bad_end, "S")
    with pytest.raises(PreconditionError) as info:
        polyring_injectivity_homotopy(a, a, theta)
    assert info.value.violations


def test_injectivity_with_nontrivial_theta(rng):
    # a(0) and b(0) differ; theta joins them by scaling an elementary factor
    for _ in range(5):
        p, q = vanishing(rng), vanishing(rng)
        x = MultiPoly.var(QQ, "X")
        s = MultiPoly.var(QQ, "S")
        a = verify_loop(E12(p + x * q))
        b = verify_loop(E12(2 * p + x * x * q))
        theta = HomotopyCert(E12(p * (1 + s)), eval_loop_at(a, 0), eval_loop_at(b, 0), "S")
        assert verify_homotopy(theta).ok
        assert verify_homotopy(polyring_injectivity_homotopy(a, b, theta)).ok


# -- elementary factorization ------------------------------------------------------
def test_diagonal_example():
    a = Mat2(P("1+eps", D2), P("0", D2), P("0", D2), P("1-eps", D2))
    fac = elementary_decomposition(a)
    kinds = [k for k, _ in fac.factors]
    assert kinds == ["E12", "E21", "E12", "E21", "E12", "E21"]
    args = [p for _, p in fac.factors]
    assert args[:2] == [P("0", D2), P("0", D2)]
    assert args[2:] == [P("-(1+eps)", D2), P("-eps", D2), P("1", D2), P("eps", D2)]
    assert fac.product() == a


def test_identity_factorization():
    fac = elementary_decomposition(Mat2.identity(D3))
    assert fac.product().is_identity()
    assert all(not c for c in fac.nil.values())


def test_not_congruent_rejected():
    with pytest.raises(NotCongruent):
        elementary_decomposition(E12(P("1", D2)))


def test_verbatim_variant_fails_when_off_diagonals_differ():
    a = E12(P("eps", D3)) @ E21(P("2*eps", D3))
    assert variant_outcomes(a) == {"verbatim": False, "transposed": True}
    with pytest.raises(DecompositionMismatch):
        elementary_decomposition(a, "verbatim")


def test_symmetric_input_satisfies_both_variants():
    a = Mat2(P("1", D2), P("eps", D2), P("eps", D2), P("1", D2))
    assert variant_outcomes(a) == {"verbatim": True, "transposed": True}


@pytest.mark.parametrize("D", [D2, D3, D4])
def test_round_trip_random(D, rng):
    for i in range(40):
        if i % 2:
            a = congruent_matrix(rng, D)
        else:
            nil = lambda: MultiPoly.const(D, rand_dual(rng, D, nilpotent=True))  # noqa: E731
            a = E12(nil()) @ E21(nil()) @ E12(nil())
        assert elementary_decomposition(a).product() == a


def test_connect_to_identity(rng):
    a = Mat2(P("1+eps", D2), P("0", D2), P("0", D2), P("1-eps", D2))
    beta = connect_to_identity(a)
    assert beta.subs({"X": 1}) == a and beta.subs({"X": 0}).is_identity()
    for _ in range(10):
        a = congruent_matrix(rng, D3)
        beta = connect_to_identity(a)
        assert beta.subs({"X": 0}).is_identity()
        assert reduce_mod_nil(beta).is_identity()


# -- contraction and lifting ---------------------------------------------------------
def test_contract_examples():
    ident = LoopRep.constant(D2, "X")
    assert contract_nil_loop(ident).matrix.is_identity()
    a = verify_loop(E12(P("eps*X*(X-1)", D2)), "X")
    cert = contract_nil_loop(a)
    assert cert.matrix == E12(P("eps*X*(X-1)*T", D2))
    b = verify_loop(E12(P("eps*X*(X-1)", D2)) @ E21(P("eps*X^2*(X-1)", D2)), "X")
    assert verify_homotopy(contract_nil_loop(b)).ok


def test_contract_requires_congruence():
    a = verify_loop(E12(P("X*(X-1)", D2)), "X")
    with pytest.raises(NotCongruent):
        contract_nil_loop(a)


def test_lift_column_scaling_example():
    bar = LoopRep(Mat2.identity(QQ), "X")
    lift = Mat2(P("1", D2), P("0", D2), P("eps*X", D2), P("1+eps*X", D2))
    out = lift_loop_mod_nil(bar, D2, lift)
    assert not check_loop(out.matrix, "X")
    assert reduce_mod_nil(out.matrix) == bar.matrix


def test_lift_of_exact_loop_is_unchanged():
    bar = verify_loop(E12(P("X*(X-1)")), "X")
    lift = E12(P("X*(X-1)", D3))
    assert lift_loop_mod_nil(bar, D3, lift).matrix == lift


def test_lift_wrong_reduction():
    bar = verify_loop(E12(P("X*(X-1)")), "X")
    with pytest.raises(WrongLift):
        lift_loop_mod_nil(bar, D2, E12(P("2*X*(X-1)", D2)))


def test_lift_random(rng):
    for _ in range(20):
        x = MultiPoly.var(QQ, "X")
        p = x * (x - 1) * rand_q(rng)
        bar = verify_loop(E12(p) @ E21(x * (x - 1) * rand_q(rng)), "X")
        D = D3
        bump = lambda: MultiPoly.univariate(D, "X", [D.make([0, rand_q(rng), rand_q(rng)]) for _ in range(2)])  # noqa: E731
        lift = bar.matrix.map(lambda e: e.map_coeffs(D.coerce, D) + bump())
        out = lift_loop_mod_nil(bar, D, lift)
        assert reduce_mod_nil(out.matrix) == bar.matrix
        assert not check_loop(out.matrix, "X")


def test_kernel_contraction_examples():
    a = verify_loop(E12(P("eps*X*(X-1)", D2)), "X")
    beta = E12(P("eps*X*(X-1)*(1-T)", D2))
    cert = kernel_contraction(a, beta)
    assert verify_homotopy(cert).ok and cert.end.matrix.is_identity()
    ident = LoopRep.constant(D2, "X")
    assert verify_homotopy(kernel_contraction(ident, Mat2.identity(D2))).ok


def test_kernel_contraction_corrupted_beta():
    a = verify_loop(E12(P("eps*X*(X-1)", D2)), "X")
    beta = E12(P("eps*X*(1-T)", D2))
    with pytest.raises(PreconditionError) as info:
        kernel_contraction(a, beta)
    assert any("beta(1, T)" in v for v in info.value.violations)


# -- graded rings -------------------------------------------------------------------
def test_swan_weibel_examples(rng):
    p = P("2 + 3*x")
    img = swan_weibel_map(p)
    assert img == P("2 + 3*x*T")
    assert img.subs({"T": 0}) == 2
    for _ in range(50):
        q = MultiPoly.from_terms(QQ, [(rand_q(rng), {"x": rng.randint(0, 3), "y": rng.randint(0, 2)}) for _ in range(4)])
        assert swan_weibel_map(q).subs({"T": 1}) == q


def test_graded_homotopy_examples(rng):
    b = verify_loop(E12(P("x1*X*(X-1)")), "X")
    cert, beta0 = graded_homotopy(b)
    assert beta0.matrix.is_identity()
    assert cert.matrix == E12(P("x1*T*X*(X-1)"))
    const = verify_loop(E12(P("3*X*(X-1)")), "X")
    cert, beta0 = graded_homotopy(const)
    assert beta0 == const and cert.matrix == const.matrix


def test_normalized_shape_rejects_non_loop_entries():
    fake = LoopRep(Mat2(P("1+X"), P("0"), P("0"), P("1")), "X")
    with pytest.raises(PreconditionError):
        normalized_loop_shape(fake)


# -- products and basepoints -------------------------------------------------------
def test_product_split_join(rng):
    R = Product(QQ, D2)
    ident = LoopRep.constant(R)
    l, r = product_split(ident)
    assert l.matrix.is_identity() and r.matrix.is_identity()
    for _ in range(20):
        left = verify_loop(E12(vanishing(rng)) @ E21(vanishing(rng)))
        right = verify_loop(E21(vanishing(rng, D2, coeff=lambda: rand_dual(rng, D2))))
        assert product_split(product_join(left, right)) == (left, right)


def test_product_split_needs_product():
    with pytest.raises(PreconditionError):
        product_split(LoopRep.constant(QQ))


def test_basepoint_shift_examples():
    a = verify_loop(E12(P("X*T*(T-1)")))
    cert = basepoint_shift_homotopy(a)
    assert cert.start.matrix == E12(P("T*(T-1)"))
    assert cert.matrix.subs({"S": 1}) == a.matrix
    free = verify_loop(E12(P("T*(T-1)")))
    c2 = basepoint_shift_homotopy(free)
    assert c2.matrix == free.matrix


def test_fresh_variable_enforced():
    a = verify_loop(E12(P("X*T*(T-1)*S")))
    with pytest.raises(PreconditionError):
        basepoint_shift_homotopy(a)


def test_rational_value_evaluation():
    a = verify_loop(E12(P("X*T*(T-1)")))
    assert eval_loop_at(a, mpq(1, 2)).matrix == E12(P("1/2*T*(T-1)"))
