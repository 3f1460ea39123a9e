"""Left ideals and left submodules of free modules over the Weyl algebra.

Any multiplicative well-order on the (x, d) exponent vectors works, because
the leading monomial of a product is the product of the leading monomials;
the default is grevlex on ``(x_1..x_n, d_1..d_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import _gb
from .polyring import GREVLEX, TermOrder
from .weyl import WeylAlgebra, WeylOp, from_elem, weyl_mul

OperatorVector = Tuple[WeylOp, ...]


def _context(ops: Sequence[WeylOp]) -> WeylAlgebra:
    algs = {P.alg for P in ops}
    if len(algs) != 1:
        raise ValueError("operators must share one Weyl algebra")
    return algs.pop()


def _vec_elem(v: Sequence[WeylOp]) -> _gb.Element:
    out: _gb.Element = {}
    for i, P in enumerate(v):
        out.update(P._elem(i))
    return out


def _elem_vec(alg: WeylAlgebra, elem: _gb.Element, rank: int) -> OperatorVector:
    return tuple(from_elem(alg, elem, i) for i in range(rank))


def _as_vectors(gens) -> Tuple[List[OperatorVector], bool]:
    """Accept either operators (rank 1) or operator vectors."""
    if gens and isinstance(gens[0], WeylOp):
        return [(g,) for g in gens], True
    return [tuple(v) for v in gens], False


# ---------------------------------------------------------------- reduction and bases

def left_reduce(P: WeylOp, basis: Sequence[WeylOp], order: TermOrder = GREVLEX) -> WeylOp:
    """Normal form of ``P`` modulo the left ideal generated by ``basis``."""
    basis = [g for g in basis if g]
    r = _gb.reduce(P._elem(), [g._elem() for g in basis], P.alg.core, order.module_key)
    return from_elem(P.alg, r)


def left_buchberger(gens: Sequence[WeylOp], order: TermOrder = GREVLEX) -> List[WeylOp]:
    """Reduced monic left Groebner basis."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    alg = _context(gens)
    gb = _gb.groebner([g._elem() for g in gens], alg.core, order.module_key)
    return [from_elem(alg, g) for g in gb]


def left_buchberger_with_cofactors(gens: Sequence[WeylOp], order: TermOrder = GREVLEX):
    """Groebner basis elements paired with left cofactors ``c`` such that
    ``sum c_i * gens_i`` equals the element.  The basis is a Groebner basis but
    not necessarily reduced."""
    alg = _context(gens)
    with_cof, _ = _gb.lifted([g._elem() for g in gens], 1, alg.core, order.module_key)
    return [(from_elem(alg, g), _elem_vec(alg, c, len(gens))) for g, c in with_cof]


@dataclass
class IdealPresentation:
    """A left ideal given by generators, with its reduced Groebner basis cached on first use."""

    generators: List[WeylOp]
    order: TermOrder = GREVLEX
    _gb: Optional[List[WeylOp]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.generators = [g for g in self.generators if g]
        if not self.generators:
            raise ValueError("an ideal presentation needs a nonzero generator")
        self.alg = _context(self.generators)

    @property
    def gb(self) -> List[WeylOp]:
        if self._gb is None:
            self._gb = left_buchberger(self.generators, self.order)
        return self._gb

    def reduce(self, P: WeylOp) -> WeylOp:
        return left_reduce(P, self.gb, self.order)

    def __contains__(self, P: WeylOp) -> bool:
        return left_ideal_member(P, self)

    def fingerprint(self) -> List[str]:
        return [str(g) for g in self.gb]


def left_ideal_member(P: WeylOp, I: Union[IdealPresentation, Sequence[WeylOp]]) -> bool:
    if not isinstance(I, IdealPresentation):
        I = IdealPresentation(list(I))
    if P.is_zero():
        return True
    return I.reduce(P).is_zero()


def left_ideal_equal(I: IdealPresentation, J: IdealPresentation) -> bool:
    if I.alg != J.alg:
        raise ValueError("ideals live in different Weyl algebras")
    if I.order != J.order:
        raise ValueError("ideals use different term orders")
    return I.gb == J.gb


# ---------------------------------------------------------------- modules

def module_groebner(vectors: Sequence[Sequence[WeylOp]], order: TermOrder = GREVLEX) -> List[OperatorVector]:
    vectors = [tuple(v) for v in vectors if any(v)]
    if not vectors:
        return []
    rank = len(vectors[0])
    alg = _context([P for v in vectors for P in v])
    gb = _gb.groebner([_vec_elem(v) for v in vectors], alg.core, order.module_key)
    return [_elem_vec(alg, g, rank) for g in gb]


def module_reduce(v: Sequence[WeylOp], basis: Sequence[Sequence[WeylOp]],
                  order: TermOrder = GREVLEX) -> OperatorVector:
    alg = v[0].alg
    r = _gb.reduce(_vec_elem(v), [_vec_elem(b) for b in basis], alg.core, order.module_key)
    return _elem_vec(alg, r, len(v))


def module_member(v: Sequence[WeylOp], vectors: Sequence[Sequence[WeylOp]],
                  order: TermOrder = GREVLEX) -> bool:
    if not any(v):
        return True
    return not any(module_reduce(v, module_groebner(vectors, order), order))


def module_equal(a: Sequence[Sequence[WeylOp]], b: Sequence[Sequence[WeylOp]],
                 order: TermOrder = GREVLEX) -> bool:
    return module_groebner(a, order) == module_groebner(b, order)


def left_syzygies(gens, order: TermOrder = GREVLEX) -> List[OperatorVector]:
    """Generators of ``{(A_1..A_k) : sum A_i * gens_i = 0}``.

    ``gens`` is a list of operators or of equal-length operator vectors.
    """
    if not gens:
        return []
    vectors, _ = _as_vectors(list(gens))
    rank = len(vectors[0])
    alg = _context([P for v in vectors for P in v])
    _, syz = _gb.lifted([_vec_elem(v) for v in vectors], rank, alg.core, order.module_key)
    out = [_elem_vec(alg, s, len(vectors)) for s in syz]
    for s in out:
        residue = combine(s, vectors)
        if any(residue):
            raise AssertionError("computed syzygy does not satisfy its relation")
    return out


def combine(coeffs: Sequence[WeylOp], vectors: Sequence[Sequence[WeylOp]]) -> OperatorVector:
    """``sum coeffs[i] * vectors[i]`` with left coefficients."""
    rank = len(vectors[0])
    alg = coeffs[0].alg
    out = [alg.zero] * rank
    for c, v in zip(coeffs, vectors):
        if c:
            for j in range(rank):
                out[j] = out[j] + weyl_mul(c, v[j])
    return tuple(out)


def normalize_vector(v: Sequence[WeylOp], order: TermOrder = GREVLEX) -> OperatorVector:
    """Scale ``v`` so that its leading coefficient (position over term) is 1."""
    pot = order.with_module("pot")
    elem = _vec_elem(v)
    lt = _gb.lead(elem, pot.module_key)
    c = elem[lt]
    return tuple(P * (1 / Fraction(c)) for P in v)


# ---------------------------------------------------------------- matrices

class OperatorMatrix:
    """Rectangular matrix of operators acting by right multiplication on row vectors."""

    def __init__(self, rows: Sequence[Sequence[WeylOp]]):
        rows = [tuple(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("empty operator matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("operator matrix rows must have equal length")
        self.rows = rows
        self.alg = _context([P for r in rows for P in r])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @classmethod
    def column(cls, entries: Sequence[WeylOp]) -> "OperatorMatrix":
        return cls([(P,) for P in entries])

    @classmethod
    def row(cls, entries: Sequence[WeylOp]) -> "OperatorMatrix":
        return cls([tuple(entries)])

    @classmethod
    def identity(cls, alg: WeylAlgebra, k: int) -> "OperatorMatrix":
        return cls([tuple(alg.one if i == j else alg.zero for j in range(k)) for i in range(k)])

    def is_zero(self) -> bool:
        return not any(P for r in self.rows for P in r)

    def __eq__(self, other):
        return isinstance(other, OperatorMatrix) and self.rows == other.rows

    def __repr__(self):
        return "OperatorMatrix(" + "; ".join(", ".join(str(P) for P in r) for r in self.rows) + ")"


def matrix_compose(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    """Matrix product ``A * B`` with entries composed by ``weyl_mul``."""
    (m, k), (k2, p) = A.shape, B.shape
    if k != k2:
        raise ValueError(f"shape mismatch: {A.shape} x {B.shape}")
    alg = A.alg
    rows = []
    for i in range(m):
        row = []
        for j in range(p):
            acc = alg.zero
            for t in range(k):
                acc = acc + weyl_mul(A.rows[i][t], B.rows[t][j])
            row.append(acc)
        rows.append(tuple(row))
    return OperatorMatrix(rows)
