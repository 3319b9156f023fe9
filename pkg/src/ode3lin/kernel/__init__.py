"""Exact rational-function arithmetic in the jet variables x, u, p = u', q = u''."""

from .parser import ParseError, parse, parse_in
from .poly import JetVar, Poly, monomial_key
from .rational import ONE, ZERO, RationalExpr, SingularPointError, format_expr, symbols

X, U, P, Q = JetVar.X, JetVar.U, JetVar.P, JetVar.Q

__all__ = [
    "JetVar",
    "Poly",
    "RationalExpr",
    "ParseError",
    "SingularPointError",
    "parse",
    "parse_in",
    "format_expr",
    "symbols",
    "monomial_key",
    "ZERO",
    "ONE",
    "X",
    "U",
    "P",
    "Q",
]
