"""Sparse multivariate polynomials over the exact rings of :mod:`sl2loops.rings`."""

from gmpy2 import mpq

from . import kernels
from .errors import IncompatibleRings
from .rings import QQ


def _align(terms, old_vars, new_vars):
    if old_vars == new_vars:
        return terms
    pos = [new_vars.index(v) for v in old_vars]
    n = len(new_vars)
    out = {}
    for e, c in terms.items():
        ne = [0] * n
        for i, k in zip(pos, e):
            ne[i] = k
        out[tuple(ne)] = c
    return out


def grlex_key(exponent):
    return (sum(exponent), exponent)


class MultiPoly:
    """Polynomial with coefficients in ``ring`` and named variables.

    ``vars`` is the sorted tuple of variables that actually occur and
    ``terms`` maps exponent tuples (aligned with ``vars``) to nonzero
    coefficients.  Instances are immutable and canonical, so equality of
    polynomials is equality of these two fields plus the ring.
    """

    __slots__ = ("ring", "vars", "terms", "_hash")

    def __init__(self, ring, vars=(), terms=None):
        terms = {} if terms is None else terms
        vars = tuple(vars)
        if list(vars) != sorted(vars) or len(set(vars)) != len(vars):
            order = sorted(set(vars))
            if len(order) != len(vars):
                raise ValueError(f"repeated variable in {vars}")
            terms = _align(terms, vars, tuple(order))
            vars = tuple(order)
        terms = {tuple(e): c for e, c in terms.items() if c}
        self.ring = ring
        self.vars, self.terms = _trim(vars, terms)
        self._hash = None

    @classmethod
    def _raw(cls, ring, vars, terms):
        p = object.__new__(cls)
        p.ring = ring
        p.vars, p.terms = _trim(vars, terms)
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, ring, value):
        c = ring.coerce(value)
        return cls._raw(ring, (), {(): c} if c else {})

    @classmethod
    def var(cls, ring, name, power=1):
        return cls._raw(ring, (name,), {(power,): ring.one()})

    @classmethod
    def zero(cls, ring=QQ):
        return cls._raw(ring, (), {})

    @classmethod
    def one(cls, ring=QQ):
        return cls.const(ring, 1)

    @classmethod
    def from_terms(cls, ring, items):
        """Build from ``(coeff, {var: exp})`` pairs; repeated monomials add."""
        names = sorted({v for _, mono in items for v in mono})
        terms = {}
        for coeff, mono in items:
            e = tuple(mono.get(v, 0) for v in names)
            c = ring.coerce(coeff)
            terms[e] = terms[e] + c if e in terms else c
        return cls._raw(ring, tuple(names), {e: c for e, c in terms.items() if c})

    @classmethod
    def univariate(cls, ring, var, coeffs):
        """From a low-to-high coefficient list."""
        terms = {(i,): ring.coerce(c) for i, c in enumerate(coeffs)}
        return cls._raw(ring, (var,), {e: c for e, c in terms.items() if c})

    # -- coercion -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            try:
                return MultiPoly.const(self.ring, other)
            except IncompatibleRings:
                raise IncompatibleRings(
                    f"polynomials over {self.ring} and {other.ring} do not mix"
                ) from None
        try:
            return MultiPoly.const(self.ring, other)
        except IncompatibleRings:
            return None

    def _pair(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vs = tuple(sorted(set(self.vars) | set(other.vars)))
        return vs, _align(self.terms, self.vars, vs), _align(other.terms, other.vars, vs)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        vs, a, b = self._pair(o)
        return MultiPoly._raw(self.ring, vs, kernels.add_terms(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        vs, a, b = self._pair(o)
        return MultiPoly._raw(self.ring, vs, kernels.add_terms(a, b, True))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return MultiPoly._raw(self.ring, self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.vars and o.terms:
            c = o.terms[()]
            scaled = {e: x * c for e, x in self.terms.items()}
            return MultiPoly._raw(self.ring, self.vars, {e: x for e, x in scaled.items() if x})
        vs, a, b = self._pair(o)
        return MultiPoly._raw(self.ring, vs, kernels.mul_terms(a, b))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = MultiPoly.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(self.ring, other)
            except IncompatibleRings:
                return NotImplemented
        elif other.ring != self.ring:
            if other.vars or self.vars:
                return False
            try:
                other = MultiPoly.const(self.ring, other)
            except IncompatibleRings:
                return False
        return self.vars == other.vars and self.terms == other.terms

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            if not self.vars:
                self._hash = hash(self.terms.get((), 0))
            else:
                self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        from .expr import print_canonical

        return f"MultiPoly({print_canonical(self)!r})"

    def __str__(self):
        from .expr import print_canonical

        return print_canonical(self)

    # -- inspection ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.vars

    def constant(self):
        """Coefficient of the empty monomial."""
        return self.terms.get((0,) * len(self.vars), self.ring.zero())

    def degree(self, var):
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in graded-lex order, largest first."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def monomials(self):
        """``(coeff, {var: exp})`` pairs in graded-lex order."""
        return [
            (c, {v: k for v, k in zip(self.vars, e) if k}) for e, c in self.sorted_terms()
        ]

    def coefficients(self, var):
        """Map ``power -> polynomial in the remaining variables``."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1 :]
        groups = {}
        for e, c in self.terms.items():
            groups.setdefault(e[i], {})[e[:i] + e[i + 1 :]] = c
        return {k: MultiPoly._raw(self.ring, rest, t) for k, t in groups.items()}

    def univariate_coeffs(self, var):
        """Low-to-high coefficient list; the polynomial must involve only ``var``."""
        if self.vars and self.vars != (var,):
            raise ValueError(f"{self} is not univariate in {var}")
        if not self.terms:
            return []
        if not self.vars:
            return [self.terms[()]]
        n = max(e[0] for e in self.terms)
        out = [self.ring.zero()] * (n + 1)
        for e, c in self.terms.items():
            out[e[0]] = c
        return out

    # -- transformations ----------------------------------------------------
    def map_coeffs(self, fn, ring):
        mapped = {e: fn(c) for e, c in self.terms.items()}
        return MultiPoly._raw(ring, self.vars, {e: c for e, c in mapped.items() if c})

    def rename(self, mapping):
        vs = tuple(mapping.get(v, v) for v in self.vars)
        return MultiPoly(self.ring, vs, self.terms)

    def subs(self, bindings):
        """Simultaneous substitution ``var -> polynomial or scalar``."""
        bound = {v: b for v, b in bindings.items() if v in self.vars}
        if not bound:
            return self
        vals = {}
        for v, b in bound.items():
            if not isinstance(b, MultiPoly) or b.ring != self.ring:
                b = MultiPoly.const(self.ring, b) if not isinstance(b, MultiPoly) else self._lift(b)
            vals[v] = b
        keep = [v for v in self.vars if v not in vals]
        out_vars = set(keep)
        for b in vals.values():
            out_vars.update(b.vars)
        out_vars = tuple(sorted(out_vars))
        keep_idx = [self.vars.index(v) for v in keep]
        bound_idx = [(self.vars.index(v), v) for v in vals]
        aligned = {v: _align(b.terms, b.vars, out_vars) for v, b in vals.items()}
        zero_e = (0,) * len(out_vars)
        one = self.ring.one()
        power_cache = {}

        def power(v, k):
            key = (v, k)
            if key not in power_cache:
                if k == 0:
                    power_cache[key] = {zero_e: one}
                elif k == 1:
                    power_cache[key] = aligned[v]
                else:
                    half = power(v, k // 2)
                    sq = kernels.mul_terms(half, half)
                    power_cache[key] = kernels.mul_terms(sq, aligned[v]) if k % 2 else sq
            return power_cache[key]

        pos = {v: out_vars.index(v) for v in keep}
        # Group terms by their bound exponents so each product is formed once.
        groups = {}
        for e, c in self.terms.items():
            be = tuple(e[i] for i, _ in bound_idx)
            ke = [0] * len(out_vars)
            for i, v in zip(keep_idx, keep):
                ke[pos[v]] = e[i]
            groups.setdefault(be, {})[tuple(ke)] = c
        acc = {}
        for be, rest in groups.items():
            prod = rest
            for (_, v), k in zip(bound_idx, be):
                if k:
                    prod = kernels.mul_terms(prod, power(v, k))
            acc = kernels.add_terms(acc, prod)
        return MultiPoly._raw(self.ring, out_vars, acc)

    def evaluate(self, values):
        """Substitute scalars for every variable and return the ring element."""
        missing = set(self.vars) - set(values)
        if missing:
            raise ValueError(f"no value for {sorted(missing)}")
        return self.subs(values).constant()

    def exact_div(self, divisor):
        """Quotient by ``divisor`` when it divides exactly, else ``None``.

        Coefficients must come from a field (Rationals).  Uses graded-lex
        leading terms; with a single divisor a zero remainder is equivalent
        to divisibility.
        """
        d = self._lift(divisor)
        if not d.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        vs, p, dv = self._pair(d)
        lead_e, lead_c = max(dv.items(), key=lambda t: grlex_key(t[0]))
        inv_lc = self.ring.invert(lead_c)
        q = {}
        rem = dict(p)
        while rem:
            e, c = max(rem.items(), key=lambda t: grlex_key(t[0]))
            shift = tuple(a - b for a, b in zip(e, lead_e))
            if any(s < 0 for s in shift):
                return None
            f = c * inv_lc
            q[shift] = f
            rem = kernels.add_terms(rem, kernels.mul_terms({shift: f}, dv), True)
        return MultiPoly._raw(self.ring, vs, q)


def _trim(vars, terms):
    if not vars:
        return (), terms
    used = [False] * len(vars)
    for e in terms:
        for i, k in enumerate(e):
            if k:
                used[i] = True
    if all(used):
        return vars, terms
    idx = [i for i, u in enumerate(used) if u]
    return (
        tuple(vars[i] for i in idx),
        {tuple(e[i] for i in idx): c for e, c in terms.items()},
    )


def poly(ring, value):
    """Lift a scalar (or pass through a polynomial) into ``ring``."""
    if isinstance(value, MultiPoly) and value.ring == ring:
        return value
    return MultiPoly.const(ring, value)


def var(name, ring=QQ):
    return MultiPoly.var(ring, name)


def Q(num, den=1):
    return mpq(num, den)
