# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the functions in ``_pykernels``.

Same signatures, same results.  Coefficients stay Python objects; the win
comes from typed loops over exponent vectors and the integer Horner steps.
"""

from math import gcd


def mul_terms(dict a, dict b):
    cdef Py_ssize_t i, n
    cdef tuple ea, eb
    cdef list bitems, buf
    cdef dict out
    if len(a) > len(b):
        a, b = b, a
    out = {}
    bitems = list(b.items())
    for ea, ca in a.items():
        n = len(ea)
        for eb, cb in bitems:
            buf = [None] * n
            for i in range(n):
                buf[i] = <long>ea[i] + <long>eb[i]
            e = tuple(buf)
            c = out.get(e)
            if c is None:
                out[e] = ca * cb
            else:
                out[e] = c + ca * cb
    return {e: c for e, c in out.items() if c}


def add_terms(dict a, dict b, bint negate=False):
    cdef dict out = dict(a)
    for e, c in b.items():
        if negate:
            c = -c
        prev = out.get(e)
        out[e] = c if prev is None else prev + c
    return {e: c for e, c in out.items() if c}


cpdef int eval_sign(list coeffs, object num, object den):
    cdef Py_ssize_t i
    acc = 0
    dpow = 1
    for i in range(len(coeffs) - 1, -1, -1):
        acc = acc * num + coeffs[i] * dpow
        dpow = dpow * den
    if acc > 0:
        return 1
    if acc < 0:
        return -1
    return 0


def sign_variations(list chain, object num, object den):
    cdef int count = 0, last = 0, s
    for coeffs in chain:
        s = eval_sign(coeffs, num, den)
        if s == 0:
            continue
        if last != 0 and s != last:
            count += 1
        last = s
    return count


cdef list _primitive(list c):
    g = 0
    for x in c:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        c = [x // g for x in c]
    return c


cdef list _strip(list c):
    while c and c[len(c) - 1] == 0:
        c.pop()
    return c


def signed_prem(list f, list g):
    cdef Py_ssize_t dg, k, i
    cdef list r = list(f)
    dg = len(g) - 1
    lc = g[dg]
    alc = abs(lc)
    sgn = 1 if lc > 0 else -1
    while r and len(r) - 1 >= dg:
        k = len(r) - 1 - dg
        lr = r[len(r) - 1]
        r = [alc * x for x in r]
        for i in range(dg + 1):
            r[i + k] -= sgn * lr * g[i]
        r.pop()
        _strip(r)
    return r


def sturm_chain(coeffs):
    cdef list f = _primitive(_strip(list(coeffs)))
    cdef list chain, r
    if len(f) <= 1:
        return [f]
    df = _primitive([i * c for i, c in enumerate(f)][1:])
    chain = [f, df]
    while True:
        r = signed_prem(chain[len(chain) - 2], chain[len(chain) - 1])
        if not r:
            break
        chain.append(_primitive([-x for x in r]))
        if len(r) == 1:
            break
    return chain
