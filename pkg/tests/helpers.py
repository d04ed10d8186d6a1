"""Strategies and seeded generators shared by the test modules."""

import random
import re
from fractions import Fraction

from gmpy2 import mpq
from hypothesis import strategies as st

from sl2loops.matrix import E12, E21, Mat2
from sl2loops.poly import MultiPoly
from sl2loops.rings import QQ, DualNumbers


# -- hypothesis strategies ---------------------------------------------------
small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.builds(
    lambda n, d: mpq(n, d),
    st.integers(min_value=-20, max_value=20),
    st.integers(min_value=1, max_value=9),
)


@st.composite
def dual_elements(draw, order=3):
    D = DualNumbers(order)
    return D.make([draw(rationals) for _ in range(order)])


@st.composite
def univariate(draw, var="T", max_degree=4, ring=QQ):
    coeffs = draw(st.lists(rationals, min_size=0, max_size=max_degree + 1))
    return MultiPoly.univariate(ring, var, coeffs)


@st.composite
def bivariate(draw, vars=("S", "T"), max_terms=5):
    items = draw(
        st.lists(
            st.tuples(rationals, st.integers(0, 3), st.integers(0, 3)),
            max_size=max_terms,
        )
    )
    return MultiPoly.from_terms(QQ, [(c, {vars[0]: i, vars[1]: j}) for c, i, j in items])


# -- seeded generators used by the acceptance harness and unit tests --------
def rand_q(rng, lo=-5, hi=5, den=4):
    return mpq(rng.randint(lo, hi), rng.randint(1, den))


def rand_poly(rng, ring=QQ, var="T", degree=3, coeff=None):
    coeff = coeff or (lambda: ring.coerce(rand_q(rng)))
    return MultiPoly.univariate(ring, var, [coeff() for _ in range(degree + 1)])


def vanishing(rng, ring=QQ, var="T", degree=2, coeff=None):
    """``var (var - 1) p(var)``: zero at both ends of the interval."""
    t = MultiPoly.var(ring, var)
    return t * (t - 1) * rand_poly(rng, ring, var, degree, coeff)


def elementary_loop(rng, ring=QQ, var="T", degree=2, coeff=None):
    p = vanishing(rng, ring, var, degree, coeff)
    return E12(p) if rng.random() < 0.5 else E21(p)


def rand_dual(rng, D, nilpotent=False):
    c = [rand_q(rng) for _ in range(D.order)]
    if nilpotent:
        c[0] = 0
    return D.make(c)


def congruent_matrix(rng, D):
    """Random det-one matrix over ``D`` that is the identity mod eps."""
    nil = lambda: MultiPoly.const(D, rand_dual(rng, D, nilpotent=True))  # noqa: E731
    a1, a2, a3 = nil(), nil(), nil()
    inv = MultiPoly.const(D, D.invert((1 + a1).constant()))
    e22 = (1 + a2 * a3) * inv
    return Mat2(1 + a1, a3, a2, e22)


def seeded(seed=20261019):
    return random.Random(seed)


# -- expression text -----------------------------------------------------------
GRAMMAR_BYTES = b"0123456789/+-*^() \nTXSepsxy_\t"


def random_expr(rng, depth=0, names=("T", "S", "X")):
    """Random text in the grammar, with spacing and redundant parentheses."""
    r = rng.random()
    if depth > 3 or r < 0.3:
        k = rng.random()
        if k < 0.4:
            return str(rng.randint(0, 12))
        if k < 0.55:
            return f"{rng.randint(0, 9)}/{rng.randint(1, 9)}"
        return rng.choice(names)
    if r < 0.45:
        return "-" + random_expr(rng, depth + 1, names)
    if r < 0.55:
        return f"({random_expr(rng, depth + 1, names)})^{rng.randint(0, 3)}"
    if r < 0.65:
        return f"( {random_expr(rng, depth + 1, names)} )"
    op = rng.choice([" + ", "-", "*", " * ", "+"])
    return random_expr(rng, depth + 1, names) + op + random_expr(rng, depth + 1, names)


def fraction_eval(text, env):
    """Independent evaluation with Python's Fraction (grammar is a subset of Python)."""
    py = re.sub(r"(\d+)/(\d+)", r"Fraction(\1, \2)", text).replace("^", "**")
    return eval(py, {"Fraction": Fraction, "__builtins__": {}}, env)  # noqa: S307


# -- acceptance reporting --------------------------------------------------------
ACCEPTANCE_LINES = {}


def report(n, ok, detail):
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok
