"""Floating-point winding oracle, independent of the exact machinery.

Samples the loop on a uniform grid and accumulates principal-value angle
increments.  Used only to cross-check exact results.
"""

import math

from .errors import OriginHit, RefineNeeded


def _horner(coeffs, t):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _float_coeffs(p, var):
    if isinstance(p, (list, tuple)):
        return [float(c) for c in p]
    return [float(c) for c in p.univariate_coeffs(var)] if p else [0.0]


def turns_of_samples(points):
    """Accumulated angle of a sampled path, in full turns.

    Raises :class:`RefineNeeded` when a single step turns by pi or more
    (the sampling cannot resolve the direction) and :class:`OriginHit`
    when a sample lands on the origin.
    """
    total = 0.0
    prev = None
    for k, (x, y) in enumerate(points):
        if x == 0.0 and y == 0.0:
            raise OriginHit(f"sample {k} is the origin")
        ang = math.atan2(y, x)
        if prev is not None:
            d = (ang - prev + math.pi) % (2 * math.pi) - math.pi
            if abs(d) >= math.pi * (1 - 1e-9):
                raise RefineNeeded(f"step {k} turns by about pi; use more samples")
            total += d
        prev = ang
    return total / (2 * math.pi)


def numeric_winding_oracle(f1, f2, samples=4096, var="T"):
    """Total angle swept by ``(f1, f2)`` over [0, 1], divided by 2 pi."""
    if samples < 2:
        raise ValueError("need at least two samples")
    c1, c2 = _float_coeffs(f1, var), _float_coeffs(f2, var)
    ts = (k / samples for k in range(samples + 1))
    return turns_of_samples((_horner(c1, t), _horner(c2, t)) for t in ts)


def _float_eval(p, point):
    total = 0.0
    for e, c in p.terms.items():
        term = float(c)
        for v, k in zip(p.vars, e):
            term *= point[v] ** k
        total += term
    return total


def numeric_circle_degree(a, b, samples=4096):
    """Turns made by ``(a, b)`` along ``(cos th, sin th)``, th in [0, 2 pi].

    ``a`` and ``b`` are polynomials over Q in ``x`` and ``y``.
    """
    pts = []
    for k in range(samples + 1):
        th = 2 * math.pi * k / samples
        pt = {"x": math.cos(th), "y": math.sin(th)}
        pts.append((_float_eval(a, pt), _float_eval(b, pt)))
    return turns_of_samples(pts)


def refined_oracle(f1, f2, samples=1024, var="T", max_samples=1 << 20):
    """Oracle that doubles the sample count until every step is below pi."""
    n = samples
    while True:
        try:
            return numeric_winding_oracle(f1, f2, n, var), n
        except RefineNeeded:
            if n >= max_samples:
                raise
            n *= 2
