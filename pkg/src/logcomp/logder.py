"""Logarithmic derivations of a divisor f, Saito bases and bracket structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import (GREVLEX, Poly, Ring, TermOrder, adjugate, buchberger, determinant,
                       exact_divide, ideal_lift, ideal_member, module_groebner, module_member,
                       module_reduce, partial_derivative,
                       poly_gcd, syzygy_module)
from .weyl import WeylAlgebra, WeylOp, apply_to_poly, lie_bracket


class DivisorError(ValueError):
    """The divisor violates a precondition (zero, not through the origin, not reduced)."""


class SaitoBasisNotFound(RuntimeError):
    pass


class QHInconsistency(RuntimeError):
    """The two quasi-homogeneity criteria disagree."""


@dataclass(frozen=True)
class LogDerivation:
    """A vector field ``delta`` together with its cofactor: ``delta(f) = a * f``."""

    delta: WeylOp
    cofactor: Poly
    divisor: Poly

    def __post_init__(self):
        vf = self.delta.as_vector_field()
        if vf is None or vf[1]:
            raise ValueError(f"{self.delta} is not a vector field")
        if apply_to_poly(self.delta, self.divisor) != self.cofactor * self.divisor:
            raise ValueError(f"{self.delta} is not logarithmic with cofactor {self.cofactor}")

    @property
    def coefficients(self) -> List[Poly]:
        return self.delta.as_vector_field()[0]

    @property
    def operator(self) -> WeylOp:
        """``delta + a``, the corresponding generator of the twisted ideal."""
        return self.delta + self.cofactor

    def degree(self) -> int:
        return max(b.degree() for b in self.coefficients)

    @classmethod
    def from_field(cls, delta: WeylOp, f: Poly) -> "LogDerivation":
        """Build from a vector field, computing the cofactor by exact division."""
        a = exact_divide(apply_to_poly(delta, f), f)
        if a is None:
            raise ValueError(f"{delta} is not logarithmic for {f}")
        return cls(delta, a, f)


@dataclass(frozen=True)
class SaitoBasis:
    derivations: Tuple[LogDerivation, ...]
    unit: Fraction
    divisor: Poly

    @property
    def n(self) -> int:
        return len(self.derivations)

    @property
    def matrix(self) -> List[List[Poly]]:
        return [d.coefficients for d in self.derivations]

    @property
    def deltas(self) -> List[WeylOp]:
        return [d.delta for d in self.derivations]

    @property
    def cofactors(self) -> List[Poly]:
        return [d.cofactor for d in self.derivations]


@dataclass
class BracketStructure:
    """``[delta_i, delta_j] = sum_k alpha[(i, j)][k] * delta_k`` for ``i < j``."""

    alpha: Dict[Tuple[int, int], List[Poly]]
    basis: SaitoBasis = field(repr=False)

    @property
    def pair(self) -> Tuple[Poly, Poly]:
        """``(alpha_1, alpha_2)`` for plane curves."""
        if self.basis.n != 2:
            raise ValueError("alpha pair is only defined for n = 2")
        return tuple(self.alpha[(0, 1)])


# ---------------------------------------------------------------- helpers

def _primitive(delta: WeylOp) -> WeylOp:
    """Scale to integer coefficients with content 1 and positive leading coefficient."""
    coeffs = list(delta.terms.values())
    den = lcm(*(c.denominator for c in coeffs))
    num = gcd(*(int(c * den) for c in coeffs))
    scaled = delta * Fraction(den, num)
    if scaled.lead()[1] < 0:
        scaled = -scaled
    return scaled


def check_divisor(f: Poly) -> None:
    if f.is_zero():
        raise DivisorError("the divisor must be nonzero")
    if f.constant_term() != 0:
        raise DivisorError(f"{f} does not vanish at the origin")
    g = f
    for i in range(f.ring.nvars):
        g = poly_gcd(g, partial_derivative(f, i))
        if g.is_constant():
            return
    if not g.is_constant():
        raise DivisorError(f"{f} is not reduced (common factor {g} with its partials)")


# ---------------------------------------------------------------- operations

def derlog_generators(f: Poly, order: TermOrder = GREVLEX, check: bool = True) -> List[LogDerivation]:
    """Generators of Der(log f) read off the syzygies of ``(f, f_1, .., f_n)``.

    A syzygy ``(s, b_1, .., b_n)`` gives ``sum b_i f_i = -s f``, i.e. the
    derivation ``sum b_i d_i`` with cofactor ``a = -s``.
    """
    if check:
        check_divisor(f)
    alg = WeylAlgebra(f.ring)
    partials = [partial_derivative(f, i) for i in range(f.ring.nvars)]
    out = []
    seen = set()
    for s in syzygy_module([f] + partials, order):
        b = list(s[1:])
        if not any(b):
            continue
        delta = _primitive(alg.vector_field(b))
        if delta in seen:
            continue
        seen.add(delta)
        out.append(LogDerivation.from_field(delta, f))
    return out


def saito_check(derivations: Sequence[LogDerivation], f: Poly) -> Optional[Fraction]:
    """Return the unit ``c`` with ``det = c * f``, or ``None`` if not a Saito basis."""
    if len(derivations) != f.ring.nvars:
        return None
    det = determinant([d.coefficients for d in derivations])
    if det.is_zero():
        return None
    q = exact_divide(det, f)
    if q is None or not q.is_constant():
        return None
    return q.constant_term()


def saito_basis(gens: Sequence[LogDerivation], f: Poly, degree_bound: Optional[int] = 2) -> SaitoBasis:
    """Pick n logarithmic derivations whose coefficient determinant is a nonzero constant times f.

    Subsets of ``gens`` are tried first, by increasing total degree (ties by
    input order).  Failing that, n-1 generators ``S`` are kept and the last
    element is solved for as ``v = sum q_i g_i``: since ``det(S, g_i) = f m_i``,
    ``(S, v)`` is a basis exactly when ``sum q_i m_i = 1``, which is an ideal
    membership question.  ``degree_bound`` caps the degree of the ``q_i``
    (``None`` for no cap).
    """
    n = f.ring.nvars
    if len(gens) < n:
        raise SaitoBasisNotFound(f"only {len(gens)} generators for a rank {n} module")
    indexed = sorted(range(len(gens)), key=lambda i: (gens[i].degree(), i))
    subsets = sorted(combinations(indexed, n),
                     key=lambda c: (sum(gens[i].degree() for i in c), sorted(c)))
    for c in subsets:
        chosen = [gens[i] for i in sorted(c, key=lambda i: (gens[i].degree(), i))]
        unit = saito_check(chosen, f)
        if unit is not None:
            return SaitoBasis(tuple(chosen), unit, f)
    found = _complete_basis(gens, f, degree_bound)
    if found is not None:
        return found
    raise SaitoBasisNotFound(f"no polynomial Saito basis found for {f} (degree bound {degree_bound})")


def _complete_basis(gens, f, degree_bound) -> Optional[SaitoBasis]:
    n = f.ring.nvars
    alg = WeylAlgebra(f.ring)
    order = sorted(range(len(gens)), key=lambda i: (gens[i].degree(), i))
    for c in combinations(order, n - 1):
        fixed = [gens[i] for i in c]
        rows = [d.coefficients for d in fixed]
        ms = []
        for g in gens:
            q = exact_divide(determinant(rows + [g.coefficients]), f)
            assert q is not None, "determinant of logarithmic fields is divisible by f"
            ms.append(q)
        cof = ideal_lift(f.ring.one, ms)
        if cof is None:
            continue
        if degree_bound is not None and max(q.degree() for q in cof) > degree_bound:
            continue
        v = alg.zero
        for q, g in zip(cof, gens):
            v = v + alg.from_poly(q) * g.delta
        red = module_reduce(tuple(v.as_vector_field()[0]), module_groebner([tuple(r) for r in rows]))
        v = _primitive(alg.vector_field(list(red)))
        cand = fixed + [LogDerivation.from_field(v, f)]
        unit = saito_check(cand, f)
        assert unit is not None
        return SaitoBasis(tuple(cand), unit, f)
    return None


def basis_from_fields(fields: Sequence[WeylOp], f: Poly) -> SaitoBasis:
    """Validate user-supplied vector fields as a Saito basis of Der(log f)."""
    ders = tuple(LogDerivation.from_field(d, f) for d in fields)
    unit = saito_check(ders, f)
    if unit is None:
        raise SaitoBasisNotFound("the given fields do not satisfy det = unit * f")
    return SaitoBasis(ders, unit, f)


def same_module(a: Sequence[LogDerivation], b: Sequence[LogDerivation]) -> bool:
    """Mutual membership of the coefficient vectors as polynomial submodules."""
    va = [tuple(d.coefficients) for d in a]
    vb = [tuple(d.coefficients) for d in b]
    return all(module_member(v, vb) for v in va) and all(module_member(v, va) for v in vb)


def decompose_field(basis: SaitoBasis, row: Sequence[Poly]) -> Optional[List[Poly]]:
    """Coefficients ``c`` with ``row = c * M`` (M the Saito matrix), via the adjugate.

    Returns ``None`` when the field is not in the module spanned by the basis.
    """
    adj = adjugate(basis.matrix)
    det = basis.divisor * basis.unit
    n = basis.n
    out = []
    for k in range(n):
        num = row[0].ring.zero
        for j in range(n):
            num = num + row[j] * adj[j][k]
        q = exact_divide(num, det)
        if q is None:
            return None
        out.append(q)
    return out


def bracket_decompose(basis: SaitoBasis) -> BracketStructure:
    """Structure polynomials of the brackets of a Saito basis."""
    deltas = basis.deltas
    alpha = {}
    for i, j in combinations(range(basis.n), 2):
        br = lie_bracket(deltas[i], deltas[j])
        vf = br.as_vector_field()
        assert vf is not None and not vf[1], "bracket of vector fields is a vector field"
        coeffs = decompose_field(basis, vf[0])
        if coeffs is None:
            raise SaitoBasisNotFound(f"bracket [d{i + 1}, d{j + 1}] not in the span: invalid Saito basis")
        back = deltas[0].alg.zero
        for c, d in zip(coeffs, deltas):
            back = back + c * d
        assert back == br, "bracket re-expansion failed"
        alpha[(i, j)] = coeffs
    return BracketStructure(alpha, basis)


def divergence(delta: WeylOp) -> Poly:
    b, _ = delta.as_vector_field()
    out = b[0].ring.zero
    for i, bi in enumerate(b):
        out = out + partial_derivative(bi, i)
    return out


@dataclass
class QHVerdict:
    quasi_homogeneous: bool
    unit_witness: Optional[int]  # index of a generator with a unit cofactor
    jacobian_member: bool

    def __bool__(self):
        return self.quasi_homogeneous


def qh_test(gens: Sequence[LogDerivation], f: Poly) -> QHVerdict:
    """Quasi-homogeneity by two independent criteria that must agree.

    1. some cofactor has a nonzero constant term (a logarithmic derivation
       with unit cofactor exists);
    2. ``f`` lies in its Jacobian ideal (commutative Groebner basis).
    """
    witness = next((i for i, d in enumerate(gens) if d.cofactor.constant_term() != 0), None)
    jac = [partial_derivative(f, i) for i in range(f.ring.nvars)]
    member = ideal_member(f, jac)
    if (witness is not None) != member:
        raise QHInconsistency(
            f"cofactor criterion says {witness is not None}, Jacobian membership says {member} for {f}; "
            "the polynomial and local answers differ")
    return QHVerdict(member, witness, member)
