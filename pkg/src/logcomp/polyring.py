"""Exact multivariate polynomials over Q and commutative Groebner bases.

Polynomials are immutable: a :class:`Ring` (variable names) plus a dict from
exponent tuples to :class:`fractions.Fraction`.  Everything above this module
(vector-field coefficients, principal symbols, Der(log f) computations) is
built on these objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import _gb

Exps = Tuple[int, ...]
Coeff = Union[int, Fraction]


class Ring:
    """Context shared by polynomials: the ordered tuple of variable names."""

    __slots__ = ("names",)

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(("Ring", self.names))

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def index(self, var: Union[int, str]) -> int:
        if isinstance(var, str):
            try:
                return self.names.index(var)
            except ValueError:
                raise ValueError(f"unknown variable {var!r} in {self}") from None
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range for {self}")
        return var

    def gen(self, var: Union[int, str]) -> "Poly":
        i = self.index(var)
        return Poly(self, {tuple(int(k == i) for k in range(self.nvars)): Fraction(1)})

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def const(self, c: Coeff) -> "Poly":
        return Poly(self, {(0,) * self.nvars: Fraction(c)} if c else {})

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def extend(self, *names: str) -> "Ring":
        return Ring(self.names + names)


# ---------------------------------------------------------------- orders

_KINDS = ("lex", "grlex", "grevlex", "weighted")


@dataclass(frozen=True)
class TermOrder:
    """Monomial order on exponent tuples, extended to free modules.

    ``priority`` permutes variables before comparison (``priority[0]`` is the
    most significant variable).  ``weighted`` compares the weight vector first
    and breaks ties with grevlex, which makes it an elimination order when the
    weights vanish outside the eliminated block.  ``module`` selects
    term-over-position (``"top"``) or position-over-term (``"pot"``); in both
    cases a lower position index is the larger one.
    """

    kind: str = "grevlex"
    priority: Optional[Tuple[int, ...]] = None
    weights: Optional[Tuple[int, ...]] = None
    module: str = "top"
    shifts: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "weighted" and self.weights is None:
            raise ValueError("weighted order needs a weight vector")
        if self.weights is not None and any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        if self.module not in ("top", "pot"):
            raise ValueError(f"unknown module extension {self.module!r}")

    @lru_cache(maxsize=None)
    def key(self, exps: Exps) -> tuple:
        e = exps if self.priority is None else tuple(exps[i] for i in self.priority)
        if self.kind == "lex":
            return e
        if self.kind == "grlex":
            return (sum(e),) + e
        rev = tuple(-v for v in reversed(e))
        if self.kind == "grevlex":
            return (sum(e),) + rev
        w = sum(a * b for a, b in zip(self.weights, exps))
        return (w, sum(e)) + rev

    def module_key(self, pos: int, exps: Exps) -> tuple:
        k = self.key(exps)
        if self.module == "pot":
            return (-pos,) + k
        if self.shifts is not None:
            k = (k[0] + self.shifts[pos],) + k[1:]
        return k + (-pos,)

    def with_module(self, module: str) -> "TermOrder":
        return TermOrder(self.kind, self.priority, self.weights, module, self.shifts)


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def order_named(name: str) -> TermOrder:
    if name not in ("lex", "grlex", "grevlex"):
        raise ValueError(f"unsupported order {name!r}")
    return TermOrder(name)


# ---------------------------------------------------------------- printing

def format_coeff_term(c: Fraction, factors: List[str], sep: str = "*") -> str:
    """Signed term text, e.g. ``-3/4*x^2*y``; the sign is a leading '-'."""
    c = Fraction(c)
    sign = "-" if c < 0 else ""
    a = abs(c)
    if not factors:
        return sign + str(a)
    body = sep.join(factors)
    if a == 1:
        return sign + body
    return sign + str(a) + sep + body


def join_terms(parts: List[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def monomial_factors(names: Sequence[str], exps: Exps) -> List[str]:
    return [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]


# ---------------------------------------------------------------- polynomials

class Poly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Dict[Exps, Coeff] = None):
        self.ring = ring
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != ring.nvars:
                raise ValueError(f"exponent {e} does not fit {ring}")
            if c:
                clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    # -- basic protocol
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(0,) * self.ring.nvars: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        _gb_add(t, other.terms, 1)
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        _gb_add(t, other.terms, -1)
        return Poly(self.ring, t)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly(self.ring, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- inspection
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def lead(self, order: TermOrder = GREVLEX) -> Tuple[Exps, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order: TermOrder = GREVLEX) -> List[Tuple[Exps, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order: TermOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        return self * (1 / self.lead(order)[1])

    def diff(self, var: Union[int, str]) -> "Poly":
        return partial_derivative(self, var)

    def truncate(self, K: int) -> "Poly":
        """Drop every term of total degree >= K (reduction mod m^K)."""
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) < K})

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def to_ring(self, ring: Ring) -> "Poly":
        """Re-embed into a ring whose names contain all of ours."""
        idx = [ring.index(n) for n in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, v in zip(idx, e):
                ne[i] = v
            out[tuple(ne)] = c
        return Poly(ring, out)

    def to_str(self, sep: str = "*", order: TermOrder = GREVLEX) -> str:
        parts = [format_coeff_term(c, monomial_factors(self.ring.names, e), sep)
                 for e, c in self.sorted_terms(order)]
        return join_terms(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r})"

    # -- bridge to the engine
    def _elem(self, pos: int = 0) -> _gb.Element:
        return {(pos, e): c for e, c in self.terms.items()}


def _gb_add(target, other, scale):
    for e, c in other.items():
        v = target.get(e, 0) + scale * c
        if v:
            target[e] = v
        else:
            target.pop(e, None)


def _from_elem(ring: Ring, elem: _gb.Element, pos: int = 0) -> Poly:
    return Poly(ring, {e: c for (p, e), c in elem.items() if p == pos})


def _same_ring(polys: Sequence[Poly]) -> Ring:
    rings = {p.ring for p in polys}
    if len(rings) != 1:
        raise ValueError("polynomials must share one ring")
    return rings.pop()


# ---------------------------------------------------------------- operations

def partial_derivative(p: Poly, var: Union[int, str]) -> Poly:
    i = p.ring.index(var)
    out = {}
    for e, c in p.terms.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return Poly(p.ring, out)


def exact_divide(p: Poly, q: Poly) -> Optional[Poly]:
    """Return ``r`` with ``p == q * r``, or ``None`` when ``q`` does not divide ``p``."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = p.ring
    lq, cq = q.lead(GREVLEX)
    rem = dict(p.terms)
    quot: Dict[Exps, Fraction] = {}
    while rem:
        e = max(rem, key=GREVLEX.key)
        if any(a < b for a, b in zip(e, lq)):
            return None
        m = tuple(a - b for a, b in zip(e, lq))
        c = rem[e] / cq
        quot[m] = c
        for eq, cq2 in q.terms.items():
            t = tuple(a + b for a, b in zip(m, eq))
            v = rem.get(t, 0) - c * cq2
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return Poly(ring, quot)


_ALG_CACHE: Dict[int, _gb.CommutativeAlgebra] = {}


def _alg(ring: Ring) -> _gb.CommutativeAlgebra:
    n = ring.nvars
    if n not in _ALG_CACHE:
        _ALG_CACHE[n] = _gb.CommutativeAlgebra(n)
    return _ALG_CACHE[n]


def poly_reduce(p: Poly, basis: Sequence[Poly], order: TermOrder = GREVLEX) -> Poly:
    """Normal form of ``p`` modulo ``basis`` by multivariate division."""
    basis = [g for g in basis if g]
    r = _gb.reduce(p._elem(), [g._elem() for g in basis], _alg(p.ring), order.module_key)
    return _from_elem(p.ring, r)


def buchberger(gens: Sequence[Poly], order: TermOrder = GREVLEX) -> List[Poly]:
    """Reduced monic Groebner basis of the ideal, sorted decreasingly."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = _same_ring(gens)
    gb = _gb.groebner([g._elem() for g in gens], _alg(ring), order.module_key, product_criterion=True)
    return [_from_elem(ring, g) for g in gb]


def ideal_member(p: Poly, gens: Sequence[Poly], order: TermOrder = GREVLEX) -> bool:
    if p.is_zero():
        return True
    gb = buchberger(gens, order)
    return poly_reduce(p, gb, order).is_zero()


def ideal_lift(p: Poly, gens: Sequence[Poly], order: TermOrder = GREVLEX) -> Optional[List[Poly]]:
    """Cofactors ``c`` with ``p == sum c_i * gens_i``, or ``None`` if ``p`` is not in the ideal."""
    ring = p.ring
    if not gens:
        return None if p else []
    with_cof, _ = _gb.lifted([g._elem() for g in gens], 1, _alg(ring), order.module_key)
    basis = [g for g, _ in with_cof]
    rem, quots = _gb.reduce_tracked(p._elem(), basis, _alg(ring), order.module_key)
    if rem:
        return None
    out = [ring.zero] * len(gens)
    for q, (_, cof) in zip(quots, with_cof):
        qp = _from_elem(ring, q)
        if qp:
            for i in range(len(gens)):
                out[i] = out[i] + qp * _from_elem(ring, cof, i)
    total = ring.zero
    for c, g in zip(out, gens):
        total = total + c * g
    assert total == p, "ideal lift check failed"
    return out


def ideal_equal(a: Sequence[Poly], b: Sequence[Poly], order: TermOrder = GREVLEX) -> bool:
    return buchberger(a, order) == buchberger(b, order)


def ideal_intersection(a: Sequence[Poly], b: Sequence[Poly]) -> List[Poly]:
    """Generators of the intersection of two ideals (tag-variable elimination)."""
    ring = _same_ring(list(a) + list(b))
    tag = "_t"
    while tag in ring.names:
        tag += "_"
    big = ring.extend(tag)
    t = big.gen(tag)
    gens = [t * g.to_ring(big) for g in a if g] + [(1 - t) * g.to_ring(big) for g in b if g]
    elim = TermOrder("weighted", weights=(0,) * ring.nvars + (1,))
    gb = buchberger(gens, elim)
    out = []
    for g in gb:
        if all(e[-1] == 0 for e in g.terms):
            out.append(Poly(ring, {e[:-1]: c for e, c in g.terms.items()}))
    return buchberger(out)


def ideal_quotient(gens: Sequence[Poly], g: Poly) -> List[Poly]:
    """Generators of ``(I : g) = {p : p*g in I}``."""
    if g.is_zero():
        raise ValueError("ideal quotient by the zero polynomial")
    gens = [h for h in gens if h]
    if not gens:
        return []
    inter = ideal_intersection(gens, [g])
    out = []
    for h in inter:
        q = exact_divide(h, g)
        assert q is not None, "intersection element not divisible by g"
        out.append(q)
    return buchberger(out)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd computed as ``a*b / lcm`` with the lcm from an ideal intersection."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    inter = ideal_intersection([a], [b])
    assert len(inter) == 1, "intersection of principal ideals is principal"
    g = exact_divide(a * b, inter[0])
    assert g is not None
    return g.monic()


PolyVector = Tuple[Poly, ...]


def syzygy_module(gens: Sequence[Poly], order: TermOrder = GREVLEX) -> List[PolyVector]:
    """Generating set of the first syzygy module of ``gens`` (lifted Groebner basis)."""
    if not gens:
        return []
    ring = _same_ring(gens)
    _, syz = _gb.lifted([g._elem() for g in gens], 1, _alg(ring), order.module_key)
    out = [tuple(_from_elem(ring, s, i) for i in range(len(gens))) for s in syz]
    for v in out:
        total = ring.zero
        for a, g in zip(v, gens):
            total = total + a * g
        assert total.is_zero(), "syzygy check failed"
    return out


# -- free modules over Q[x] (vectors of polynomials)

def _vec_elem(v: Sequence[Poly]) -> _gb.Element:
    out: _gb.Element = {}
    for i, p in enumerate(v):
        out.update(p._elem(i))
    return out


def _elem_vec(ring: Ring, elem: _gb.Element, rank: int) -> PolyVector:
    return tuple(_from_elem(ring, elem, i) for i in range(rank))


def module_groebner(vectors: Sequence[Sequence[Poly]], order: TermOrder = GREVLEX) -> List[PolyVector]:
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    rank = len(vectors[0])
    ring = _same_ring([p for v in vectors for p in v])
    gb = _gb.groebner([_vec_elem(v) for v in vectors], _alg(ring), order.module_key)
    return [_elem_vec(ring, g, rank) for g in gb]


def module_reduce(v: Sequence[Poly], basis: Sequence[Sequence[Poly]], order: TermOrder = GREVLEX) -> PolyVector:
    ring = v[0].ring
    r = _gb.reduce(_vec_elem(v), [_vec_elem(b) for b in basis], _alg(ring), order.module_key)
    return _elem_vec(ring, r, len(v))


def module_member(v: Sequence[Poly], vectors: Sequence[Sequence[Poly]], order: TermOrder = GREVLEX) -> bool:
    if not any(v):
        return True
    return not any(module_reduce(v, module_groebner(vectors, order), order))


def module_syzygies(vectors: Sequence[Sequence[Poly]], order: TermOrder = GREVLEX) -> List[PolyVector]:
    """Syzygies ``(g_1..g_k)`` with ``sum g_i * v_i = 0`` for vectors ``v_i``."""
    if not vectors:
        return []
    rank = len(vectors[0])
    ring = _same_ring([p for v in vectors for p in v])
    _, syz = _gb.lifted([_vec_elem(v) for v in vectors], rank, _alg(ring), order.module_key)
    return [_elem_vec(ring, s, len(vectors)) for s in syz]


def determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by cofactor expansion (the matrices here are at most 3x3 or so)."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def adjugate(matrix: Sequence[Sequence[Poly]]) -> List[List[Poly]]:
    """Classical adjoint: ``M * adj(M) = adj(M) * M = det(M) * I``."""
    n = len(matrix)
    ring = matrix[0][0].ring
    if n == 1:
        return [[ring.one]]
    adj = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [list(r[:j]) + list(r[j + 1:]) for k, r in enumerate(matrix) if k != i]
            c = determinant(minor)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj
