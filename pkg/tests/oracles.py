"""Independent oracles: sympy for polynomial algebra, plain linear algebra for membership."""

from fractions import Fraction
from itertools import product

import sympy as sp

from logcomp.polyring import Poly, Ring


def symbols(ring: Ring):
    return sp.symbols(ring.names)


def to_sympy(p: Poly):
    syms = symbols(p.ring)
    return sp.Add(*[sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s ** e for s, e in zip(syms, exps)])
                    for exps, c in p.terms.items()])


def from_sympy(expr, ring: Ring) -> Poly:
    P = sp.Poly(sp.expand(expr), *symbols(ring))
    return Poly(ring, {m: Fraction(int(c.p), int(c.q)) for m, c in P.terms()})


def sympy_groebner(polys, order="grevlex"):
    ring = polys[0].ring
    G = sp.groebner([to_sympy(p) for p in polys], *symbols(ring), order=order, domain=sp.QQ)
    return [from_sympy(g, ring) for g in G.exprs]


def sympy_contains(p: Poly, gens, order="grevlex") -> bool:
    G = sp.groebner([to_sympy(g) for g in gens], *symbols(p.ring), order=order, domain=sp.QQ)
    return G.contains(to_sympy(p))


def monomials_upto(nvars, d):
    return [e for e in product(range(d + 1), repeat=nvars) if sum(e) <= d]


def bounded_membership(p: Poly, gens, mult_deg: int) -> bool:
    """Is ``p = sum q_i g_i`` with ``deg q_i <= mult_deg``?  Exact rank test via sympy."""
    ring = p.ring
    cols = []
    for g in gens:
        for e in monomials_upto(ring.nvars, mult_deg):
            cols.append(Poly(ring, {e: 1}) * g)
    support = sorted({e for c in cols + [p] for e in c.terms})
    A = sp.Matrix([[sp.Rational(c.terms.get(e, 0)) for c in cols] for e in support])
    b = sp.Matrix([sp.Rational(p.terms.get(e, 0)) for e in support])
    return A.rank() == A.row_join(b).rank()
