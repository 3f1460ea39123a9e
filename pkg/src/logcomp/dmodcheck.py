"""Checks on the D-modules built from a Saito basis.

Everything here is verified by exact computation: resolutions by composing
operator matrices, duality by comparing reduced left Groebner bases,
symbol-level regularity by ideal quotients, and the Ext^2 obstruction by
linear algebra on truncated polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .logder import BracketStructure, LogDerivation, QHVerdict, SaitoBasis, divergence
from .ncgb import (IdealPresentation, OperatorMatrix, OperatorVector, left_ideal_equal,
                   left_syzygies, matrix_compose, module_equal, module_member,
                   normalize_vector)
from .polyring import GREVLEX, Poly, TermOrder, buchberger, ideal_equal, ideal_member, ideal_quotient
from .weyl import MeroElement, WeylOp, apply_to_meromorphic, jet_apply, principal_symbol, transpose


class InconsistentReport(RuntimeError):
    """Sub-reports contradict each other; this points at an engine bug."""


# ---------------------------------------------------------------- ideals

def build_log_ideals(basis: SaitoBasis, order: TermOrder = GREVLEX) -> Tuple[IdealPresentation, IdealPresentation]:
    """``(I_log, I_log_tilde)``: left ideals generated by the ``delta_i`` and by the ``delta_i + a_i``."""
    I = IdealPresentation(list(basis.deltas), order)
    It = IdealPresentation([d.operator for d in basis.derivations], order)
    I.gb, It.gb  # populate the caches
    return I, It


def annihilator_containment(basis: SaitoBasis, f: Optional[Poly] = None) -> bool:
    """Whether every ``delta_i + a_i`` kills ``1/f``."""
    f = basis.divisor if f is None else f
    inv = MeroElement(f.ring.one, 1, f)
    return all(apply_to_meromorphic(d.operator, inv).is_zero() for d in basis.derivations)


# ---------------------------------------------------------------- resolutions

def bracket_relations(basis: SaitoBasis, structure: BracketStructure) -> List[OperatorVector]:
    """Syzygies of ``(delta_1..delta_n)`` coming from the brackets.

    ``[d_i, d_j] = sum_k alpha_k d_k`` reads ``sum_k A_k d_k = 0`` with
    ``A_i = -d_j - alpha_i``, ``A_j = d_i - alpha_j`` and ``A_k = -alpha_k`` otherwise.
    """
    deltas = basis.deltas
    alg = deltas[0].alg
    rels = []
    for (i, j), alpha in sorted(structure.alpha.items()):
        row = [alg.from_poly(-a) for a in alpha]
        row[i] = row[i] - deltas[j]
        row[j] = row[j] + deltas[i]
        rels.append(tuple(row))
    return rels


@dataclass
class ResolutionReport:
    n: int
    phi1: Optional[OperatorMatrix] = None
    phi2: Optional[OperatorMatrix] = None
    psi1: Optional[OperatorMatrix] = None
    psi2: Optional[OperatorMatrix] = None
    phi_composition_zero: Optional[bool] = None
    psi_composition_zero: Optional[bool] = None
    residues: Dict[str, str] = field(default_factory=dict)
    symbols_equal: bool = False
    symbols_regular: Optional[bool] = None
    # n >= 3: the syzygy chain of I_log
    relations: List[OperatorVector] = field(default_factory=list)
    relations_are_syzygies: Optional[bool] = None
    relations_generate_first_syzygies: Optional[bool] = None
    second_syzygies: List[OperatorVector] = field(default_factory=list)
    second_composition_zero: Optional[bool] = None

    @property
    def ok(self) -> bool:
        flags = [self.phi_composition_zero, self.psi_composition_zero, self.relations_are_syzygies,
                 self.second_composition_zero]
        return all(f is not False for f in flags) and self.symbols_equal


def _is_regular_sequence(polys: Sequence[Poly]) -> Tuple[bool, Optional[int], Optional[Poly]]:
    """``(regular, failing index, witness)`` via successive ideal quotients."""
    for i, p in enumerate(polys):
        prev = list(polys[:i])
        if not prev:
            if p.is_zero():
                return False, i, None
            continue
        quot = ideal_quotient(prev, p)
        gb = buchberger(prev)
        for q in quot:
            if not ideal_member(q, gb):
                return False, i, q
    return True, None, None


def resolution_check(basis: SaitoBasis, structure: BracketStructure, order: TermOrder = GREVLEX) -> ResolutionReport:
    n = basis.n
    rep = ResolutionReport(n)
    deltas = basis.deltas
    ops = [d.operator for d in basis.derivations]
    symbols = [principal_symbol(d) for d in deltas]
    rep.symbols_equal = all(principal_symbol(P) == s for P, s in zip(ops, symbols))
    rep.symbols_regular = _is_regular_sequence(symbols)[0]
    if n == 2:
        a1, a2 = basis.cofactors
        al1, al2 = structure.pair
        d1, d2 = deltas
        rep.phi1 = OperatorMatrix.column(ops)
        rep.phi2 = OperatorMatrix.row([-d2 - a2 - al1, d1 + a1 - al2])
        rep.psi1 = OperatorMatrix.column(deltas)
        rep.psi2 = OperatorMatrix.row([-d2 - al1, d1 - al2])
        for name, A, B in (("phi", rep.phi2, rep.phi1), ("psi", rep.psi2, rep.psi1)):
            C = matrix_compose(A, B)
            setattr(rep, f"{name}_composition_zero", C.is_zero())
            if not C.is_zero():
                rep.residues[name] = str(C.rows[0][0])
        return rep
    rels = bracket_relations(basis, structure)
    rep.relations = rels
    R = OperatorMatrix(rels)
    rep.psi1 = OperatorMatrix.column(deltas)
    C = matrix_compose(R, rep.psi1)
    rep.relations_are_syzygies = C.is_zero()
    if not C.is_zero():
        rep.residues["relations"] = "; ".join(str(r[0]) for r in C.rows)
    first = left_syzygies(deltas, order)
    rep.relations_generate_first_syzygies = module_equal(first, rels, order)
    second = [normalize_vector(s, order) for s in left_syzygies(rels, order)]
    rep.second_syzygies = second
    if second:
        C2 = matrix_compose(OperatorMatrix(second), R)
        rep.second_composition_zero = C2.is_zero()
    else:
        rep.second_composition_zero = True
    return rep


# ---------------------------------------------------------------- duality

@dataclass
class DualityReport:
    transposed: List[WeylOp]
    equal: bool
    gb_transposed: List[str]
    gb_tilde: List[str]
    identities: Dict[str, bool] = field(default_factory=dict)


def duality_check(basis: SaitoBasis, structure: BracketStructure, order: TermOrder = GREVLEX,
                  last_syzygy: Optional[Sequence[WeylOp]] = None) -> DualityReport:
    """Compare the transposed presentation of the dual of M_log with the twisted ideal.

    For curves the dual is presented by ``delta_2^t + alpha_1, delta_1^t - alpha_2``.
    For n = 3 the entries of the generator of the last syzygy module are
    transposed (computed here unless ``last_syzygy`` is supplied).
    """
    _, It = build_log_ideals(basis, order)
    identities = {}
    if basis.n == 2:
        d1, d2 = basis.deltas
        a1, a2 = basis.cofactors
        al1, al2 = structure.pair
        transposed = [transpose(d2) + al1, transpose(d1) - al2]
        identities["-d1^t + alpha2 == d1 + a1"] = (-transpose(d1) + al2) == d1 + a1
        identities["d2^t + alpha1 == -d2 - a2"] = (transpose(d2) + al1) == -d2 - a2
    else:
        if last_syzygy is None:
            res = resolution_check(basis, structure, order)
            if len(res.second_syzygies) != 1:
                raise InconsistentReport(
                    f"expected a cyclic last syzygy module, got {len(res.second_syzygies)} generators")
            last_syzygy = res.second_syzygies[0]
        transposed = [transpose(s) for s in last_syzygy]
    J = IdealPresentation(transposed, order)
    return DualityReport(transposed, left_ideal_equal(J, It), J.fingerprint(), It.fingerprint(), identities)


# ---------------------------------------------------------------- gr^F

@dataclass
class GrFReport:
    symbols: List[Poly]
    regular: bool
    failing_index: Optional[int]
    witness: Optional[Poly]
    symbol_ideals_equal: bool


def grF_analysis(basis: SaitoBasis) -> GrFReport:
    symbols = [principal_symbol(d) for d in basis.deltas]
    tilde = [principal_symbol(d.operator) for d in basis.derivations]
    regular, idx, witness = _is_regular_sequence(symbols)
    return GrFReport(symbols, regular, idx, witness, ideal_equal(symbols, tilde))


def check_nonregularity_witness(symbols: Sequence[Poly], witness: Poly, index: int) -> Tuple[bool, bool]:
    """``(witness not in <s_0..s_{i-1}>, witness * s_i in <s_0..s_{i-1}>)``."""
    prev = list(symbols[:index])
    gb = buchberger(prev)
    return (not ideal_member(witness, gb), ideal_member(witness * symbols[index], gb))


# ---------------------------------------------------------------- Ext^2 probe

def _solvable(rows: List[List[Fraction]], rhs: List[Fraction]) -> bool:
    """Consistency of ``A u = b`` by exact Gaussian elimination."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return all(row[-1] == 0 for row in m[r:])


def ext2_system(ops: Sequence[WeylOp], K: int) -> Tuple[List[List[Fraction]], List[Fraction], List[tuple]]:
    """Linear system for ``sum_i ops[i](h_i) = 1 mod m^K`` with ``deg h_i <= K``.

    Returns ``(matrix, rhs, unknowns)``; rows are indexed by monomials of
    degree < K, columns by ``(i, monomial)`` pairs.
    """
    ring = ops[0].alg.ring
    nv = ring.nvars
    monos_in = [e for d in range(K + 1) for e in _monomials(nv, d)]
    monos_out = [e for d in range(K) for e in _monomials(nv, d)]
    row_of = {e: i for i, e in enumerate(monos_out)}
    cols = []
    unknowns = []
    for i, P in enumerate(ops):
        for e in monos_in:
            img = jet_apply(P, Poly(ring, {e: 1}), K)
            col = [Fraction(0)] * len(monos_out)
            for t, c in img.terms.items():
                col[row_of[t]] = c
            cols.append(col)
            unknowns.append((i, e))
    matrix = [[cols[j][r] for j in range(len(cols))] for r in range(len(monos_out))]
    rhs = [Fraction(1) if not any(e) else Fraction(0) for e in monos_out]
    return matrix, rhs, unknowns


def _monomials(nvars: int, d: int):
    if nvars == 1:
        yield (d,)
        return
    for k in range(d, -1, -1):
        for rest in _monomials(nvars - 1, d - k):
            yield (k,) + rest


@dataclass
class Ext2Probe:
    solvable: Dict[int, bool]
    first_unsolvable: Optional[int]

    @property
    def certificate(self) -> bool:
        """True when ``1`` provably lies outside the image, i.e. Ext^2 does not vanish."""
        return self.first_unsolvable is not None


def ext2_operators(basis: SaitoBasis, structure: BracketStructure) -> List[WeylOp]:
    """Entries of the last map of the resolution of the twisted module."""
    d1, d2 = basis.deltas
    a1, a2 = basis.cofactors
    al1, al2 = structure.pair
    return [-d2 - a2 - al1, d1 + a1 - al2]


def ext2_jet_probe(basis: SaitoBasis, structure: BracketStructure, K_max: int = 10) -> Ext2Probe:
    """Decide, for each K, whether ``1`` is in the image of the dual last map modulo ``m^K``.

    The operators have order one, so the truncated problem only sees inputs
    of degree <= K; unsolvability at some K is therefore a proof that ``1``
    is not in the image.  Solvability up to ``K_max`` is only evidence.
    """
    if basis.n != 2:
        raise ValueError("the Ext^2 probe is implemented for plane curves")
    if K_max < 1:
        raise ValueError("K_max must be at least 1")
    ops = ext2_operators(basis, structure)
    solvable = {}
    first = None
    for K in range(1, K_max + 1):
        A, b, _ = ext2_system(ops, K)
        ok = _solvable(A, b)
        solvable[K] = ok
        if not ok:
            first = K
            # solvability mod m^K' implies solvability mod m^K for K <= K'
            for K2 in range(K + 1, K_max + 1):
                solvable[K2] = False
            break
    return Ext2Probe(solvable, first)


# ---------------------------------------------------------------- verdict

@dataclass
class LCTVerdict:
    holds: Optional[bool]
    label: str
    checks: Dict[str, object] = field(default_factory=dict)


def lct_verdict(n: int, qh: QHVerdict, duality: DualityReport, resolution: ResolutionReport,
                grf: GrFReport, containment: bool, probe: Optional[Ext2Probe] = None) -> LCTVerdict:
    if not containment:
        raise InconsistentReport("twisted ideal does not annihilate 1/f")
    if not resolution.ok:
        raise InconsistentReport(f"resolution compositions do not vanish: {resolution.residues}")
    if n == 2:
        if not duality.equal or not all(duality.identities.values()):
            raise InconsistentReport("duality fails for a plane curve")
        if not grf.regular:
            raise InconsistentReport("symbols of a plane-curve Saito basis are not a regular sequence")
        checks: Dict[str, object] = {"duality": True, "containment": True}
        if probe is None:
            status = "not run"
        elif qh.quasi_homogeneous:
            if probe.certificate:
                raise InconsistentReport("quasi-homogeneous curve with an Ext^2 obstruction")
            status = "solvable at all tested K"
        else:
            status = f"certificate at K={probe.first_unsolvable}" if probe.certificate else "inconclusive"
        checks["ext2_probe"] = status
        if qh.quasi_homogeneous:
            return LCTVerdict(True, "holds", checks)
        return LCTVerdict(False, "fails", checks)
    checks = {"duality": duality.equal, "containment": containment, "grF_regular": grf.regular}
    if not duality.equal:
        return LCTVerdict(None, "unverified: duality check failed", checks)
    return LCTVerdict(True, "asserted, verified modulo Ann-equality", checks)
