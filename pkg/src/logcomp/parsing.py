"""Plain-text syntax for polynomials and operators.

Grammar (``*`` is mandatory, juxtaposition is an error)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | IDENT | '(' expr ')'

``NUMBER`` is an integer or a rational literal ``p/q``; ``IDENT`` is a
variable or a partial ``d<var>``.  Products are compositions in the Weyl
algebra, so ``dx*x`` reads as ``x*dx + 1``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from .polyring import Poly, Ring
from .weyl import WeylAlgebra, WeylOp

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")
_PREFERRED = ("x", "y", "z", "w", "u", "v", "t")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def _position(src: str, i: int) -> Tuple[int, int]:
    line = src.count("\n", 0, i) + 1
    col = i - (src.rfind("\n", 0, i) + 1) + 1
    return line, col


def tokenize(src: str) -> List[Token]:
    out = []
    i = 0
    while True:
        while i < len(src) and src[i].isspace():
            i += 1
        if i >= len(src):
            break
        m = _TOKEN.match(src, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {src[i]!r}", *_position(src, i))
        start = m.start(m.lastgroup)
        out.append(Token(m.lastgroup, m.group(m.lastgroup), *_position(src, start)))
        i = m.end()
    end = _position(src, len(src))
    out.append(Token("end", "", *end))
    return out


def infer_variables(src: str) -> Tuple[str, ...]:
    """Variables named in ``src``; ``d<v>`` counts as a partial of ``v``."""
    idents = [t.text for t in tokenize(src) if t.kind == "ident"]
    plain = {s for s in idents if not (len(s) > 1 and s[0] == "d")}
    plain |= {s[1:] for s in idents if len(s) > 1 and s[0] == "d"}
    ranked = [v for v in _PREFERRED if v in plain] + sorted(plain - set(_PREFERRED))
    return tuple(ranked)


class _Parser:
    def __init__(self, src: str, alg: WeylAlgebra, allow_partials: bool):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.alg = alg
        self.allow_partials = allow_partials

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.column)

    def parse(self) -> WeylOp:
        if self.peek().kind == "end":
            self.error("empty expression")
        v = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            if tok.kind in ("num", "ident") or tok.text == "(":
                self.error("missing '*' (juxtaposition is not allowed)")
            self.error(f"unexpected {tok.text!r}")
        return v

    def expr(self) -> WeylOp:
        v = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> WeylOp:
        v = self.unary()
        while self.peek().text == "*":
            self.take()
            v = v * self.unary()
        return v

    def unary(self) -> WeylOp:
        if self.peek().text == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> WeylOp:
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            tok = self.take()
            if tok.kind != "num" or "/" in tok.text:
                self.error("exponent must be a non-negative integer literal", tok)
            return base ** int(tok.text)
        return base

    def atom(self) -> WeylOp:
        tok = self.take()
        if tok.kind == "num":
            return self.alg.const(Fraction(tok.text))
        if tok.kind == "ident":
            names = self.alg.names
            if tok.text in names:
                return self.alg.x(tok.text)
            if tok.text[0] == "d" and tok.text[1:] in names:
                if not self.allow_partials:
                    self.error(f"partial {tok.text!r} not allowed in a polynomial", tok)
                return self.alg.d(tok.text[1:])
            self.error(f"unknown identifier {tok.text!r}", tok)
        if tok.text == "(":
            v = self.expr()
            if self.take().text != ")":
                self.error("expected ')'", self.toks[self.i - 1])
            return v
        self.error(f"unexpected {tok.text or 'end of input'!r}", tok)


def _algebra(variables) -> WeylAlgebra:
    if isinstance(variables, WeylAlgebra):
        return variables
    if isinstance(variables, Ring):
        return WeylAlgebra(variables)
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(",") if v.strip()]
    return WeylAlgebra(tuple(variables))


def parse_expression(src: str, variables=None, allow_partials: bool = True) -> Union[Poly, WeylOp]:
    """Parse into a ``Poly`` when no partial occurs, otherwise into a ``WeylOp``."""
    if variables is None:
        variables = infer_variables(src)
        if not variables:
            variables = ("x",)
    alg = _algebra(variables)
    op = _Parser(src, alg, allow_partials).parse()
    if op.order() <= 0:
        return _as_poly(op)
    return op


def _as_poly(op: WeylOp) -> Poly:
    n = op.alg.n
    return Poly(op.alg.ring, {e[:n]: c for e, c in op.terms.items()})


def parse_poly(src: str, variables=None) -> Poly:
    p = parse_expression(src, variables, allow_partials=False)
    return p


def parse_operator(src: str, variables=None) -> WeylOp:
    if variables is None:
        variables = infer_variables(src) or ("x",)
    alg = _algebra(variables)
    return _Parser(src, alg, True).parse()


def format_expression(v: Union[Poly, WeylOp], pretty: bool = False) -> str:
    """Printer inverse to the parser; ``pretty`` swaps ``*`` for spaces."""
    return v.to_str(" " if pretty else "*")
