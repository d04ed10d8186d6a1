"""Pure-Python versions of the inner loops.

Every function here has a drop-in twin in ``_ckernels.pyx``; the package
picks whichever imports at load time.  Coefficients are arbitrary Python
objects supporting ``+``, ``*`` and truthiness (zero is falsy).
"""


def mul_terms(a, b):
    """Product of two sparse term maps ``{exponent tuple: coeff}``.

    Both maps must use exponent tuples of the same length.
    """
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    bitems = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bitems:
            e = tuple([x + y for x, y in zip(ea, eb)])
            c = get(e)
            out[e] = ca * cb if c is None else c + ca * cb
    return {e: c for e, c in out.items() if c}


def add_terms(a, b, negate=False):
    out = dict(a)
    get = out.get
    for e, c in b.items():
        if negate:
            c = -c
        prev = get(e)
        out[e] = c if prev is None else prev + c
    return {e: c for e, c in out.items() if c}


def eval_sign(coeffs, num, den):
    """Sign of ``sum coeffs[i] * (num/den)**i`` for integer coeffs, den > 0.

    Evaluates the homogenised form ``den**n * p(num/den)`` with integers only.
    """
    acc = 0
    dpow = 1
    n = len(coeffs)
    # Horner on the reversed list keeps the homogenising power in step.
    for i in range(n - 1, -1, -1):
        acc = acc * num + coeffs[i] * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


def sign_variations(chain, num, den):
    """Number of sign changes of a Sturm chain at ``num/den``; zeros skipped."""
    count = 0
    last = 0
    for coeffs in chain:
        s = eval_sign(coeffs, num, den)
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _primitive(c):
    from math import gcd

    g = 0
    for x in c:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        c = [x // g for x in c]
    return c


def _strip(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def signed_prem(f, g):
    """Remainder of f by g scaled by a positive constant.

    Coefficient lists are low-to-high integers.  Scaling by
    ``|lc(g)|**(deg f - deg g + 1)`` keeps the sign of the true remainder,
    which is what Sturm chains need.
    """
    r = list(f)
    dg = len(g) - 1
    lc = g[-1]
    alc = abs(lc)
    while len(r) - 1 >= dg and r:
        k = len(r) - 1 - dg
        lr = r[-1]
        # r <- alc * r - sign(lc) * lr * x^k * g
        sgn = 1 if lc > 0 else -1
        r = [alc * x for x in r]
        for i, gi in enumerate(g):
            r[i + k] -= sgn * lr * gi
        r.pop()
        _strip(r)
    return r


def sturm_chain(coeffs):
    """Sturm chain of an integer polynomial (low-to-high), primitive parts."""
    f = _primitive(_strip(list(coeffs)))
    if len(f) <= 1:
        return [f]
    df = _primitive([i * c for i, c in enumerate(f)][1:])
    chain = [f, df]
    while True:
        r = signed_prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_primitive([-x for x in r]))
        if len(r) == 1:
            break
    return chain
