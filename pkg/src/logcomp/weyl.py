"""The Weyl algebra D = Q[x_1..x_n]<d_1..d_n> in normal form.

An operator is stored as a dict ``(alpha + beta) -> coefficient`` meaning
``sum c * x^alpha d^beta`` with every x to the left of every d.  The
algebra also acts on polynomials and on fractions ``g / f^k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import _gb
from .polyring import (GREVLEX, Poly, Ring, TermOrder, exact_divide, format_coeff_term,
                       join_terms, monomial_factors, partial_derivative)

Exps = Tuple[int, ...]

_SYMBOL_NAMES = {1: ("ξ",), 2: ("ξ", "η"), 3: ("ξ", "η", "ζ")}


class WeylAlgebra:
    """Context for operators: the coordinate names and derived rings."""

    def __init__(self, names: Union[Ring, Iterable[str]]):
        self.ring = names if isinstance(names, Ring) else Ring(names)
        self.n = self.ring.nvars
        if self.n < 1:
            raise ValueError("the Weyl algebra needs at least one variable")
        self.partial_names = tuple("d" + v for v in self.ring.names)
        sym = _SYMBOL_NAMES.get(self.n, tuple(f"xi{i + 1}" for i in range(self.n)))
        self.symbol_ring = Ring(self.ring.names + sym)
        self.core = _gb.WeylAlgebraCore(self.n)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.ring.names

    def __eq__(self, other):
        return isinstance(other, WeylAlgebra) and self.ring == other.ring

    def __hash__(self):
        return hash(("Weyl", self.ring))

    def __repr__(self):
        return f"WeylAlgebra({', '.join(self.names)})"

    def x(self, var) -> "WeylOp":
        return self.from_poly(self.ring.gen(var))

    def d(self, var) -> "WeylOp":
        i = self.ring.index(var)
        e = [0] * (2 * self.n)
        e[self.n + i] = 1
        return WeylOp(self, {tuple(e): 1})

    def const(self, c) -> "WeylOp":
        return WeylOp(self, {(0,) * (2 * self.n): c})

    @property
    def zero(self) -> "WeylOp":
        return WeylOp(self, {})

    @property
    def one(self) -> "WeylOp":
        return self.const(1)

    def from_poly(self, p: Poly) -> "WeylOp":
        if p.ring != self.ring:
            p = p.to_ring(self.ring)
        pad = (0,) * self.n
        return WeylOp(self, {e + pad: c for e, c in p.terms.items()})

    def vector_field(self, coeffs: Sequence[Poly]) -> "WeylOp":
        """The derivation ``sum coeffs[i] * d_i``."""
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients")
        out = self.zero
        for i, b in enumerate(coeffs):
            out = out + self.from_poly(b) * self.d(i)
        return out


class WeylOp:
    """Immutable element of the Weyl algebra in normal form."""

    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg: WeylAlgebra, terms: Dict[Exps, Union[int, Fraction]] = None):
        self.alg = alg
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                if len(e) != 2 * alg.n:
                    raise ValueError(f"exponent {e} does not fit {alg}")
                clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, WeylOp):
            return self.alg == other.alg and self.terms == other.terms
        if isinstance(other, (int, Fraction, Poly)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alg, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            if other.alg != self.alg:
                raise ValueError(f"context mismatch: {self.alg} vs {other.alg}")
            return other
        if isinstance(other, Poly):
            return self.alg.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return self.alg.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return WeylOp(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp(self.alg, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return WeylOp(self.alg, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return weyl_mul(other, self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = self.alg.one
        for _ in range(k):
            out = out * self
        return out

    def order(self) -> int:
        """Order as a differential operator (-1 for zero)."""
        n = self.alg.n
        return max((sum(e[n:]) for e in self.terms), default=-1)

    def sorted_terms(self, order: TermOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def lead(self, order: TermOrder = GREVLEX) -> Tuple[Exps, Fraction]:
        if not self.terms:
            raise ValueError("zero operator has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def to_str(self, sep: str = "*", order: TermOrder = GREVLEX) -> str:
        names = self.alg.names + self.alg.partial_names
        return join_terms([format_coeff_term(c, monomial_factors(names, e), sep)
                           for e, c in self.sorted_terms(order)])

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"WeylOp({self.to_str()!r})"

    def coefficient_of(self, beta: Exps) -> Poly:
        """Polynomial coefficient of ``d^beta``."""
        n = self.alg.n
        return Poly(self.alg.ring, {e[:n]: c for e, c in self.terms.items() if e[n:] == tuple(beta)})

    def as_vector_field(self) -> Optional[Tuple[List[Poly], Poly]]:
        """``(b, a0)`` with ``self = sum b_i d_i + a0`` when the order is at most one."""
        if self.order() > 1:
            return None
        n = self.alg.n
        unit = lambda i: tuple(int(k == i) for k in range(n))
        return [self.coefficient_of(unit(i)) for i in range(n)], self.coefficient_of((0,) * n)

    def _elem(self, pos: int = 0) -> _gb.Element:
        return {(pos, e): c for e, c in self.terms.items()}


def from_elem(alg: WeylAlgebra, elem: _gb.Element, pos: int = 0) -> WeylOp:
    return WeylOp(alg, {e: c for (p, e), c in elem.items() if p == pos})


# ---------------------------------------------------------------- operations

def weyl_mul(P: WeylOp, Q: WeylOp) -> WeylOp:
    """Normal form of the composition ``P o Q``."""
    if P.alg != Q.alg:
        raise ValueError(f"context mismatch: {P.alg} vs {Q.alg}")
    core = P.alg.core
    q = Q._elem()
    out: _gb.Element = {}
    for e, c in P.terms.items():
        _gb.add_scaled(out, core.mulmono(e, q), c)
    return from_elem(P.alg, out)


def transpose(P: WeylOp) -> WeylOp:
    """Formal adjoint: ``x^t = x``, ``d^t = -d`` and ``(PQ)^t = Q^t P^t``."""
    n = P.alg.n
    core = P.alg.core
    out: _gb.Element = {}
    zero = (0,) * n
    for e, c in P.terms.items():
        a, b = e[:n], e[n:]
        sign = -1 if sum(b) % 2 else 1
        # (x^a d^b)^t = (-1)^|b| d^b x^a
        for exps, k in core.mono_product(zero, b, a, zero):
            key = (0, exps)
            v = out.get(key, 0) + sign * c * k
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return from_elem(P.alg, out)


def lie_bracket(P: WeylOp, Q: WeylOp) -> WeylOp:
    return weyl_mul(P, Q) - weyl_mul(Q, P)


def principal_symbol(P: WeylOp) -> Poly:
    """Top-order part of ``P`` with each ``d_i`` replaced by a commuting symbol variable."""
    if P.is_zero():
        raise ValueError("the zero operator has no principal symbol")
    n = P.alg.n
    r = P.order()
    return Poly(P.alg.symbol_ring, {e: c for e, c in P.terms.items() if sum(e[n:]) == r})


def apply_to_poly(P: WeylOp, g: Poly) -> Poly:
    alg = P.alg
    if g.ring != alg.ring:
        raise ValueError(f"ring mismatch: {g.ring} vs {alg.ring}")
    n = alg.n
    out = alg.ring.zero
    cache: Dict[Exps, Poly] = {}
    for e, c in P.terms.items():
        a, b = e[:n], e[n:]
        if b not in cache:
            h = g
            for i, k in enumerate(b):
                for _ in range(k):
                    h = partial_derivative(h, i)
            cache[b] = h
        h = cache[b]
        if h:
            out = out + Poly(alg.ring, {a: c}) * h
    return out


def jet_apply(P: WeylOp, g: Poly, K: int) -> Poly:
    """``apply_to_poly`` followed by truncation modulo ``m^K``."""
    if K < 0:
        raise ValueError("truncation order must be non-negative")
    return apply_to_poly(P, g).truncate(K)


@dataclass(frozen=True)
class MeroElement:
    """The fraction ``numerator / base^pole`` in O[1/base], kept reduced."""

    numerator: Poly
    pole: int
    base: Poly

    def __post_init__(self):
        if self.pole < 0:
            raise ValueError("pole order must be non-negative")
        if self.base.is_zero() or self.base.is_constant():
            raise ValueError("the pole base must be a non-constant polynomial")
        g, k = self.numerator, self.pole
        if g.is_zero():
            k = 0
        while k > 0:
            q = exact_divide(g, self.base)
            if q is None:
                break
            g, k = q, k - 1
        object.__setattr__(self, "numerator", g)
        object.__setattr__(self, "pole", k)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __str__(self):
        if self.pole == 0:
            return str(self.numerator)
        return f"({self.numerator})/({self.base})^{self.pole}"


def apply_to_meromorphic(P: WeylOp, m: MeroElement) -> MeroElement:
    """Exact action of ``P`` on ``g / f^k`` via the quotient rule."""
    alg = P.alg
    f = m.base
    if f.ring != alg.ring or m.numerator.ring != alg.ring:
        raise ValueError("ring mismatch between operator and fraction")
    n = alg.n
    df = [partial_derivative(f, i) for i in range(n)]
    r = max(P.order(), 0)
    top = m.pole + r
    total = alg.ring.zero
    for e, c in P.terms.items():
        a, b = e[:n], e[n:]
        u, j = m.numerator, m.pole
        for i, k in enumerate(b):
            for _ in range(k):
                # d(u / f^j) = (u' f - j u f') / f^(j+1)
                u = partial_derivative(u, i) * f - u * df[i] * j
                j += 1
        total = total + Poly(alg.ring, {a: c}) * u * f ** (top - j)
    return MeroElement(total, top, f)
