"""Expression grammar for polynomial entries.

::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INTEGER)*
    atom   := INTEGER | RATIONAL | IDENT | "(" expr ")"

``RATIONAL`` is a single token such as ``3/2``; there is no division
operator.  Exponents are nonnegative integer literals.  Identifiers that
name a generator of the active ring (``eps``, ``x``, ``y``, ...) denote ring
constants; every other identifier is a polynomial variable.
"""

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import IncompatibleRings, ParseError
from .poly import MultiPoly, grlex_key

MAX_DEPTH = 100
MAX_EXPONENT = 10_000
RESERVED = frozenset({"eps"})


# -- AST ------------------------------------------------------------------
@dataclass(frozen=True)
class Node:
    line: int
    column: int


@dataclass(frozen=True)
class Int(Node):
    value: int


@dataclass(frozen=True)
class Rat(Node):
    num: int
    den: int


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    left: Node
    right: Node


class Add(BinOp):
    pass


class Sub(BinOp):
    pass


class Mul(BinOp):
    pass


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Group(Node):
    inner: Node


# -- lexer ----------------------------------------------------------------
@dataclass(frozen=True)
class Token:
    kind: str  # INT RAT IDENT OP EOF
    text: str
    line: int
    column: int


def _position(text, index):
    line = text.count("\n", 0, index) + 1
    start = text.rfind("\n", 0, index) + 1
    return line, index - start + 1


def _decode(source):
    if isinstance(source, (bytes, bytearray)):
        try:
            return bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(source[: exc.start]).decode("utf-8", errors="replace")
            line, col = _position(prefix, len(prefix))
            raise ParseError("invalid UTF-8 byte", line, col) from None
    return source


def tokenize(source):
    text = _decode(source)
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        line, col = _position(text, i)
        if ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            if j + 1 < n and text[j] == "/" and text[j + 1].isascii() and text[j + 1].isdigit():
                k = j + 1
                while k < n and text[k].isascii() and text[k].isdigit():
                    k += 1
                if int(text[j + 1 : k]) == 0:
                    raise ParseError("zero denominator in rational literal", line, col)
                tokens.append(Token("RAT", text[i:k], line, col))
                i = k
            else:
                tokens.append(Token("INT", text[i:j], line, col))
                i = j
            continue
        if ch.isascii() and ch.isalpha():
            j = i + 1
            while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] == "_")):
                j += 1
            tokens.append(Token("IDENT", text[i:j], line, col))
            i = j
            continue
        if ch in "+-*^()":
            tokens.append(Token("OP", ch, line, col))
            i += 1
            continue
        if ch == "/":
            raise ParseError("division is not part of the grammar", line, col)
        raise ParseError(f"unexpected character {ch!r}", line, col)
    line, col = _position(text, n)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- parser ---------------------------------------------------------------
class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0
        self.depth = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.column)

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("expression nested too deeply")

    def expr(self):
        self.enter()
        node = self.term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.take()
            right = self.term()
            cls = Add if op.text == "+" else Sub
            node = cls(op.line, op.column, node, right)
        self.depth -= 1
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "OP" and self.peek().text == "*":
            op = self.take()
            node = Mul(op.line, op.column, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.take()
            self.enter()
            node = Neg(tok.line, tok.column, self.unary())
            self.depth -= 1
            return node
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek().kind == "OP" and self.peek().text == "^":
            self.take()
            tok = self.peek()
            if tok.kind != "INT":
                raise self.error("exponent must be a nonnegative integer literal", tok)
            self.take()
            node = Pow(tok.line, tok.column, node, int(tok.text))
        return node

    def atom(self):
        tok = self.take()
        if tok.kind == "INT":
            return Int(tok.line, tok.column, int(tok.text))
        if tok.kind == "RAT":
            num, den = tok.text.split("/")
            return Rat(tok.line, tok.column, int(num), int(den))
        if tok.kind == "IDENT":
            return Var(tok.line, tok.column, tok.text)
        if tok.kind == "OP" and tok.text == "(":
            inner = self.expr()
            close = self.take()
            if close.kind != "OP" or close.text != ")":
                raise self.error("expected ')'", close)
            return Group(tok.line, tok.column, inner)
        if tok.kind == "EOF":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok.text!r}", tok)


def parse_expr(source):
    """Parse text (or UTF-8 bytes) into an AST; raises :class:`ParseError`."""
    parser = _Parser(tokenize(source))
    node = parser.expr()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise parser.error(f"unexpected {tok.text!r}", tok)
    return node


def to_poly(node, ring, allowed=None):
    """Evaluate an AST to a canonical :class:`MultiPoly` over ``ring``.

    ``allowed`` restricts the polynomial variables; ``None`` admits any
    identifier that is not a ring generator or reserved name.
    """
    gens = set(ring.gens)

    def ev(n):
        if isinstance(n, Int):
            return MultiPoly.const(ring, n.value)
        if isinstance(n, Rat):
            return MultiPoly.const(ring, mpq(n.num, n.den))
        if isinstance(n, Var):
            if n.name in gens:
                return MultiPoly.const(ring, ring.gen(n.name))
            if n.name in RESERVED or (allowed is not None and n.name not in allowed):
                raise ParseError(f"unbound variable {n.name!r} under {ring}", n.line, n.column)
            return MultiPoly.var(ring, n.name)
        if isinstance(n, Group):
            return ev(n.inner)
        if isinstance(n, Neg):
            return -ev(n.operand)
        if isinstance(n, (BinOp, Pow)):
            # long operator chains are left-deep; walk the spine without recursing
            spine = []
            while isinstance(n, (BinOp, Pow)):
                spine.append(n)
                n = n.base if isinstance(n, Pow) else n.left
            acc = ev(n)
            for op in reversed(spine):
                if isinstance(op, Pow):
                    if op.exponent > MAX_EXPONENT:
                        raise ParseError(f"exponent {op.exponent} exceeds {MAX_EXPONENT}", op.line, op.column)
                    acc = acc**op.exponent
                elif isinstance(op, Add):
                    acc = acc + ev(op.right)
                elif isinstance(op, Sub):
                    acc = acc - ev(op.right)
                else:
                    acc = acc * ev(op.right)
            return acc
        raise TypeError(f"not an expression node: {n!r}")

    try:
        return ev(node)
    except IncompatibleRings as exc:
        raise ParseError(str(exc), node.line, node.column) from None


def parse_poly(text, ring, allowed=None):
    return to_poly(parse_expr(text), ring, allowed)


# -- printer --------------------------------------------------------------
def _flatten(p):
    """Rational terms over the union of ring generators and variables."""
    flat = {}
    for e, c in p.terms.items():
        mono = {v: k for v, k in zip(p.vars, e) if k}
        for q, gm in p.ring.expand(c):
            m = dict(mono)
            for g, k in gm.items():
                m[g] = m.get(g, 0) + k
            key = tuple(sorted(m.items()))
            flat[key] = flat.get(key, 0) + q
    return {k: q for k, q in flat.items() if q}


def _mono_text(mono):
    return "*".join(v if k == 1 else f"{v}^{k}" for v, k in mono)


def format_terms(flat):
    if not flat:
        return "0"
    names = sorted({v for key in flat for v, _ in key})

    def key(item):
        m = dict(item[0])
        return grlex_key(tuple(m.get(v, 0) for v in names))

    out = []
    for mono, q in sorted(flat.items(), key=key, reverse=True):
        neg = q < 0
        a = -q if neg else q
        if not mono:
            body = str(a)
        elif a == 1:
            body = _mono_text(mono)
        else:
            body = f"{a}*{_mono_text(mono)}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def print_canonical(p):
    """Deterministic text for ``p``; ``parse_poly`` reads it back exactly.

    Localization and product coefficients have no division-free text form;
    they print in a readable but non-parseable shape (the JSON codec is the
    round-trippable format for those rings).
    """
    kind = getattr(p.ring, "kind", "")
    if kind == "localization":
        loc = p.ring
        nums, n = loc.to_common(list(p.terms.values()))
        base = loc.base
        num_poly = MultiPoly._raw(base, p.vars, dict(zip(p.terms.keys(), nums)))
        num_txt = format_terms(_flatten(num_poly))
        if n == 0:
            return num_txt
        s_txt = format_terms(_flatten(MultiPoly.const(base, loc.s)))
        return f"({num_txt}) / ({s_txt})^{n}"
    if kind == "product":
        left, right = split_product_poly(p)
        return f"[{print_canonical(left)} | {print_canonical(right)}]"
    return format_terms(_flatten(p))


def split_product_poly(p):
    ring = p.ring
    left = MultiPoly(ring.left, p.vars, {e: c.left for e, c in p.terms.items()})
    right = MultiPoly(ring.right, p.vars, {e: c.right for e, c in p.terms.items()})
    return left, right


def join_product_poly(ring, left, right):
    vs = tuple(sorted(set(left.vars) | set(right.vars)))
    from .poly import _align

    lt = _align(left.terms, left.vars, vs)
    rt = _align(right.terms, right.vars, vs)
    terms = {}
    for e in set(lt) | set(rt):
        terms[e] = ring.pair(lt.get(e, ring.left.zero()), rt.get(e, ring.right.zero()))
    return MultiPoly(ring, vs, terms)
