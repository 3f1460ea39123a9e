from fractions import Fraction

import pytest

from logcomp.golden import SURFACE_COFACTORS, SURFACE_VARS, surface_divisor, surface_fields
from logcomp.logder import (DivisorError, LogDerivation, QHInconsistency, SaitoBasisNotFound,
                            basis_from_fields, bracket_decompose, check_divisor, derlog_generators,
                            divergence, qh_test, same_module, saito_basis, saito_check)
from logcomp.parsing import parse_operator, parse_poly
from logcomp.polyring import determinant

V = ("x", "y")


def P(s, v=V):
    return parse_poly(s, v)


def O(s, v=V):
    return parse_operator(s, v)


def fields_of(gens):
    return {(d.delta, d.cofactor) for d in gens}


def test_derlog_normal_crossing():
    f = P("x*y")
    got = fields_of(derlog_generators(f))
    assert (O("x*dx"), P("1")) in got and (O("y*dy"), P("1")) in got


def test_derlog_cusp():
    f = P("x^2 - y^3")
    got = fields_of(derlog_generators(f))
    assert (O("3*x*dx + 2*y*dy"), P("6")) in got
    assert (O("3*y^2*dx + 2*x*dy"), P("0")) in got


def test_derlog_surface():
    h = surface_divisor()
    ref = basis_from_fields(surface_fields(), h)
    assert same_module(derlog_generators(h), ref.derivations)
    assert [c.to_str() for c in ref.cofactors] == ["4", "x", "2*x - 3*y"]


def test_divisor_preconditions():
    with pytest.raises(DivisorError):
        check_divisor(P("x^2*y"))
    with pytest.raises(DivisorError):
        check_divisor(P("x + 1"))
    with pytest.raises(DivisorError):
        check_divisor(P("0"))


def test_log_derivation_validation():
    f = P("x*y")
    LogDerivation(O("x*dx"), P("1"), f)
    with pytest.raises(ValueError):
        LogDerivation(O("x*dx"), P("2"), f)
    with pytest.raises(ValueError):
        LogDerivation.from_field(O("dx"), f)


def test_saito_check():
    f = P("x*y")
    assert saito_check([LogDerivation.from_field(O("x*dx"), f), LogDerivation.from_field(O("y*dy"), f)], f) == 1
    cusp = P("x^2 - y^3")
    b = saito_basis(derlog_generators(cusp), cusp)
    assert b.unit == 6
    assert determinant(b.matrix) == 6 * cusp
    assert saito_check(derlog_generators(surface_divisor())[:3], surface_divisor()) is not None


def test_saito_basis_via_completion():
    f = P("x^5 + y^5 + x^3*y^3")
    b = saito_basis(derlog_generators(f), f)
    assert determinant(b.matrix) == b.unit * f


def test_saito_basis_failure_is_reported():
    f = P("x*y")
    gens = derlog_generators(f)
    with pytest.raises(SaitoBasisNotFound):
        saito_basis(gens[:1], f)
    with pytest.raises(SaitoBasisNotFound):
        basis_from_fields([O("x*dx"), O("x*y*dy")], f)


def test_brackets():
    f = P("x*y")
    st = bracket_decompose(saito_basis(derlog_generators(f), f))
    assert all(a.is_zero() for a in st.pair)
    cusp = P("x^2 - y^3")
    st = bracket_decompose(saito_basis(derlog_generators(cusp), cusp))
    assert [a.to_str() for a in st.pair] == ["0", "1"]
    h = surface_divisor()
    st = bracket_decompose(basis_from_fields(surface_fields(), h))
    assert [a.to_str() for a in st.alpha[(1, 2)]] == ["0", "-x", "0"]


def test_divergence_identity_cusp():
    cusp = P("x^2 - y^3")
    b = saito_basis(derlog_generators(cusp), cusp)
    al1, al2 = bracket_decompose(b).pair
    a1, a2 = b.cofactors
    d1, d2 = b.deltas
    assert a1 == al2 + divergence(d1)
    assert a2 == -al1 + divergence(d2)


def test_qh():
    cusp = P("x^2 - y^3")
    v = qh_test(derlog_generators(cusp), cusp)
    assert v.quasi_homogeneous and v.jacobian_member
    f = P("x^4 + y^5 + x*y^4")
    v = qh_test(derlog_generators(f), f)
    assert not v.quasi_homogeneous and v.unit_witness is None
    f = P("x")
    assert qh_test(derlog_generators(f), f).quasi_homogeneous


def test_qh_witness_is_unit_cofactor():
    cusp = P("x^2 - y^3")
    b = saito_basis(derlog_generators(cusp), cusp)
    v = qh_test(b.derivations, cusp)
    assert b.cofactors[v.unit_witness].constant_term() == 6


def test_qh_disagreement_raises():
    # a node with a second critical point away from the origin
    f = P("x^2 - y^2 + x^3")
    with pytest.raises(QHInconsistency):
        qh_test(derlog_generators(f), f)


def test_smooth_divisor_basis():
    f = P("x")
    b = saito_basis(derlog_generators(f), f)
    assert [d.to_str() for d in b.deltas] == ["dy", "x*dx"]
    assert b.cofactors[1] == P("1")
