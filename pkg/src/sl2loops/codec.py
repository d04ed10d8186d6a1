"""JSON encoding of ring descriptors, polynomials, matrices and rows.

Ring descriptors::

    {"kind": "rationals"} | {"kind": "integers"} | {"kind": "dual", "order": 3}
    {"kind": "polynomial", "coeff": <ring>, "gens": ["y"]}
    {"kind": "quotient", "base": <polynomial ring>, "relation": "x^2+y^2-1",
     "var": "y", "domain": true}
    {"kind": "localization", "base": <ring>, "s": "y*(1-y)"}
    {"kind": "product", "left": <ring>, "right": <ring>}
    {"kind": "circle"}                      # shorthand for Q[x,y]/(x^2+y^2-1)

Entries are expression strings.  Over a localization an entry may be
``{"num": expr, "den_power": n}`` meaning ``num / s^n``; over a product it
is ``{"left": entry, "right": entry}``.
"""

import json
from pathlib import Path

from gmpy2 import mpq

from .errors import ParseError, SchemaError
from .expr import format_terms, join_product_poly, parse_poly, print_canonical, split_product_poly, _flatten
from .matrix import Mat2
from .poly import MultiPoly
from .polyrings import Localization, PolynomialRing, Quotient
from .rings import QQ, ZZ, DualNumbers, Integers, Product, Rationals


def _need(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def ring_from_json(d):
    if isinstance(d, str):
        d = {"kind": d}
    if not isinstance(d, dict):
        raise SchemaError(f"ring descriptor must be an object, got {type(d).__name__}")
    kind = _need(d, "kind", "ring")
    try:
        if kind in ("rationals", "Q"):
            return QQ
        if kind in ("integers", "Z"):
            return ZZ
        if kind == "dual":
            order = _need(d, "order", "dual ring")
            if not isinstance(order, int) or isinstance(order, bool) or order < 2:
                raise SchemaError("dual ring order must be an integer >= 2")
            return DualNumbers(order)
        if kind == "polynomial":
            gens = _need(d, "gens", "polynomial ring")
            if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
                raise SchemaError("polynomial ring gens must be a list of names")
            return PolynomialRing(ring_from_json(d.get("coeff", "rationals")), tuple(gens))
        if kind == "quotient":
            base = ring_from_json(_need(d, "base", "quotient ring"))
            if not isinstance(base, PolynomialRing):
                raise SchemaError("quotient base must be a polynomial ring")
            rel = parse_poly(_need(d, "relation", "quotient ring"), base.coeff, allowed=set(base.gens))
            return Quotient(base, rel, _need(d, "var", "quotient ring"), bool(d.get("domain", False)))
        if kind == "circle":
            from .gamma import circle_ring

            return circle_ring()
        if kind == "localization":
            base = ring_from_json(_need(d, "base", "localization"))
            s = entry_from_json(_need(d, "s", "localization"), base, allowed=set())
            return Localization(base, s.constant() if s else base.zero())
        if kind == "product":
            return Product(ring_from_json(_need(d, "left", "product")), ring_from_json(_need(d, "right", "product")))
    except ValueError as exc:
        raise SchemaError(f"invalid ring descriptor: {exc}") from None
    raise SchemaError(f"unknown ring kind {kind!r}")


def ring_to_json(ring):
    if isinstance(ring, Rationals):
        return {"kind": "rationals"}
    if isinstance(ring, Integers):
        return {"kind": "integers"}
    if isinstance(ring, DualNumbers):
        return {"kind": "dual", "order": ring.order}
    if isinstance(ring, PolynomialRing):
        return {"kind": "polynomial", "coeff": ring_to_json(ring.coeff), "gens": list(ring.gens)}
    if isinstance(ring, Quotient):
        return {
            "kind": "quotient",
            "base": ring_to_json(ring.base),
            "relation": print_canonical(ring.relation),
            "var": ring.var,
            "domain": ring.domain,
        }
    if isinstance(ring, Localization):
        return {"kind": "localization", "base": ring_to_json(ring.base), "s": _base_text(ring.base, ring.s)}
    if isinstance(ring, Product):
        return {"kind": "product", "left": ring_to_json(ring.left), "right": ring_to_json(ring.right)}
    raise SchemaError(f"cannot encode ring {ring}")


def _base_text(base, element):
    return format_terms(_flatten(MultiPoly.const(base, element)))


def entry_from_json(v, ring, allowed=None):
    """One matrix entry (or ring element) as a :class:`MultiPoly` over ``ring``."""
    if isinstance(ring, Localization):
        if isinstance(v, dict):
            num = _need(v, "num", "fraction")
            n = v.get("den_power", 0)
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise SchemaError("den_power must be a nonnegative integer")
        else:
            num, n = v, 0
        p = entry_from_json(num, ring.base, allowed)
        return p.map_coeffs(lambda c: ring.fraction(c, n), ring)
    if isinstance(ring, Product):
        if not isinstance(v, dict):
            p = entry_from_json(v, ring.left, allowed)
            q = entry_from_json(v, ring.right, allowed)
        else:
            p = entry_from_json(_need(v, "left", "product entry"), ring.left, allowed)
            q = entry_from_json(_need(v, "right", "product entry"), ring.right, allowed)
        return join_product_poly(ring, p, q)
    if isinstance(v, bool):
        raise SchemaError("entries must be expression strings")
    if isinstance(v, int):
        v = str(v)
    if not isinstance(v, str):
        raise SchemaError(f"entries must be expression strings, got {type(v).__name__}")
    return parse_poly(v, ring, allowed)


def entry_to_json(p):
    ring = p.ring
    if isinstance(ring, Localization):
        nums, n = ring.to_common(list(p.terms.values()))
        num = MultiPoly._raw(ring.base, p.vars, dict(zip(p.terms.keys(), nums)))
        text = format_terms(_flatten(num)) if num.terms else "0"
        return {"num": text, "den_power": n} if n else text
    if isinstance(ring, Product):
        left, right = split_product_poly(p)
        return {"left": entry_to_json(left), "right": entry_to_json(right)}
    return print_canonical(p)


def matrix_from_json(v, ring, where="matrix"):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(r, list) and len(r) == 2 for r in v)):
        raise SchemaError(f"{where} must be [[e11, e12], [e21, e22]]")
    (a, b), (c, d) = v
    return Mat2(*(entry_from_json(e, ring) for e in (a, b, c, d)))


def matrix_to_json(m):
    return [[entry_to_json(m.e11), entry_to_json(m.e12)], [entry_to_json(m.e21), entry_to_json(m.e22)]]


def row_from_json(v, ring):
    from .gamma import verify_unimodular

    a = entry_from_json(_need(v, "a", "row"), ring)
    b = entry_from_json(_need(v, "b", "row"), ring)
    w = v.get("witness")
    if w is not None:
        if not (isinstance(w, list) and len(w) == 2):
            raise SchemaError("row witness must be [b1, b2]")
        w = tuple(entry_from_json(e, ring) for e in w)
    return verify_unimodular(a, b, w)


def row_to_json(r):
    return {"a": entry_to_json(r.a), "b": entry_to_json(r.b), "witness": [entry_to_json(r.b1), entry_to_json(r.b2)]}


def load_json(source):
    """Parse JSON from a path or an inline JSON text."""
    text = source
    if not source.lstrip().startswith(("{", "[", '"')):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def rational_from_text(text):
    try:
        q = mpq(text)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"not a rational number: {text!r}") from None
    if q <= 0:
        raise SchemaError("refinement width must be positive")
    return q
