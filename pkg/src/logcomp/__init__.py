"""Exact computations with logarithmic derivations and D-modules of free divisors."""

__version__ = "0.1.0"

from .polyring import GREVLEX, LEX, Poly, Ring, TermOrder
from .weyl import WeylAlgebra, WeylOp
from .parsing import parse_expression, parse_operator, parse_poly
from .logder import (LogDerivation, SaitoBasis, bracket_decompose, derlog_generators, qh_test,
                     saito_basis)

__all__ = ["GREVLEX", "LEX", "Poly", "Ring", "TermOrder", "WeylAlgebra", "WeylOp",
           "parse_expression", "parse_operator", "parse_poly", "LogDerivation", "SaitoBasis",
           "bracket_decompose", "derlog_generators", "qh_test", "saito_basis"]
