"""Compiled and pure kernels agree; Sturm isolation against known roots."""

import math
import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from sl2loops import kernels
from sl2loops.errors import ToolkitError
from sl2loops.kernels import _pykernels
from sl2loops.poly import MultiPoly
from sl2loops.rings import QQ
from sl2loops.sturm import count_roots, isolate_real_roots

try:
    from sl2loops.kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
int_lists = st.lists(st.integers(-50, 50), min_size=1, max_size=8)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_c
@given(int_lists, st.integers(-30, 30), st.integers(1, 30))
def test_eval_sign_agrees(coeffs, num, den):
    assert _ckernels.eval_sign(coeffs, num, den) == _pykernels.eval_sign(coeffs, num, den)


@needs_c
@given(int_lists)
def test_sturm_chain_agrees(coeffs):
    assert _ckernels.sturm_chain(coeffs) == _pykernels.sturm_chain(coeffs)


@needs_c
@given(
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5), max_size=6),
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5), max_size=6),
)
def test_term_kernels_agree(a, b):
    a = {e: c for e, c in a.items() if c}
    b = {e: c for e, c in b.items() if c}
    assert _ckernels.mul_terms(a, b) == _pykernels.mul_terms(a, b)
    assert _ckernels.add_terms(a, b, True) == _pykernels.add_terms(a, b, True)


def P(coeffs):
    return MultiPoly.univariate(QQ, "T", coeffs)


def test_isolation_examples():
    iso = isolate_real_roots(P([mpq(-1, 2), 1]))
    assert iso.count == 1 and mpq(1, 2) in iso.intervals[0]
    assert isolate_real_roots(P([1, 0, 1])).count == 0
    T = MultiPoly.var(QQ, "T")
    iso = isolate_real_roots(4 * T * (1 - T) * (2 * T - 1))
    roots = [iv.lo for iv in iso.intervals]
    assert all(iv.exact for iv in iso.intervals) and roots == [0, mpq(1, 2), 1]


def test_zero_polynomial_rejected():
    with pytest.raises(ToolkitError):
        isolate_real_roots(MultiPoly.zero(QQ))


def test_refinement_width():
    T = MultiPoly.var(QQ, "T")
    iso = isolate_real_roots(T * T - mpq(1, 2), width=mpq(1, 1000))
    (iv,) = iso.intervals
    assert iv.width <= mpq(1, 1000)
    assert iv.lo ** 2 < mpq(1, 2) < iv.hi ** 2


def test_known_roots_oracle():
    # products of distinct rational linear factors and positive quadratics
    rng = random.Random(7)
    T = MultiPoly.var(QQ, "T")
    for _ in range(100):
        roots = sorted({mpq(rng.randint(-8, 16), rng.randint(1, 8)) for _ in range(rng.randint(0, 4))})
        p = MultiPoly.one(QQ) * rng.choice([1, -3, mpq(2, 5)])
        for r in roots:
            p = p * (T - r) ** rng.randint(1, 2)
        for _ in range(rng.randint(0, 2)):
            p = p * ((T - mpq(rng.randint(-3, 3), 2)) ** 2 + mpq(rng.randint(1, 5), 7))
        inside = [r for r in roots if 0 <= r <= 1]
        assert count_roots(p) == len(inside)
        iso = isolate_real_roots(p, width=mpq(1, 64))
        assert len(iso.intervals) == len(inside)
        for iv, r in zip(iso.intervals, inside):
            assert r in iv


def test_irrational_roots_located():
    T = MultiPoly.var(QQ, "T")
    p = 25 * T * T - 5 * T - 1  # roots (1 +- sqrt 5)/10
    iso = isolate_real_roots(p, lo=-1, hi=1, width=mpq(1, 10**6))
    want = sorted([(1 - math.sqrt(5)) / 10, (1 + math.sqrt(5)) / 10])
    for iv, r in zip(iso.intervals, want):
        assert float(iv.lo) <= r <= float(iv.hi)
