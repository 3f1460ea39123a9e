"""Hypothesis strategies for small polynomials and operators."""

from fractions import Fraction

from hypothesis import strategies as st

from logcomp.polyring import Poly, Ring
from logcomp.weyl import WeylAlgebra, WeylOp

coeffs = st.one_of(st.integers(-4, 4), st.fractions(min_value=-3, max_value=3, max_denominator=3)).map(Fraction)


def exponents(n, max_deg):
    return st.lists(st.integers(0, max_deg), min_size=n, max_size=n).filter(lambda e: sum(e) <= max_deg).map(tuple)


def polys(ring: Ring, max_deg=3, max_terms=4):
    return st.dictionaries(exponents(ring.nvars, max_deg), coeffs, max_size=max_terms).map(
        lambda d: Poly(ring, d))


def operators(alg: WeylAlgebra, max_deg=3, max_order=3, max_terms=4):
    n = alg.n

    def key(e):
        return sum(e[:n]) <= max_deg and sum(e[n:]) <= max_order

    ex = st.lists(st.integers(0, max(max_deg, max_order)), min_size=2 * n, max_size=2 * n).map(tuple).filter(key)
    return st.dictionaries(ex, coeffs, max_size=max_terms).map(lambda d: WeylOp(alg, d))


def nonzero(strategy):
    return strategy.filter(lambda v: not v.is_zero())
