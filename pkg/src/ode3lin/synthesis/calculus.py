"""Rational antiderivatives and rational solutions of log-derivative equations.

All routines stay inside the field of rational functions: when an answer
would need a logarithm or an exponential they raise instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..kernel import P, Q, U, X, Poly, RationalExpr
from ..kernel import _backend
from ..kernel.linalg import scaled_numerators, solve_constants, solve_linear
from ..kernel.rational import ONE, ZERO
from .errors import AnsatzExhausted, NonrationalAntiderivative, NotExact


def solve_function_coefficients(
    target: RationalExpr, basis: Sequence[RationalExpr], var: int
) -> Optional[List[RationalExpr]]:
    """Coefficients c_k free of ``var`` with ``sum(c_k * basis_k) == target``.

    Splits the identity by powers of ``var`` and solves the resulting linear
    system over the field of rational functions in the other variables.
    """
    nums = scaled_numerators([target, *basis])
    split = [n.coefficients_in(var) for n in nums]
    powers = sorted(set().union(*(s.keys() for s in split)))
    rows = [[RationalExpr.coerce(s.get(j, Poly())) for s in split[1:]] for j in powers]
    rhs = [RationalExpr.coerce(split[0].get(j, Poly())) for j in powers]
    if not rows:
        return [ZERO] * len(basis)
    return solve_linear(rows, rhs, ZERO)


def antiderivative(g: RationalExpr, var: int) -> RationalExpr:
    """A rational F with ∂F/∂var == g, integration constant zero.

    The denominator of a rational antiderivative divides gcd(D, ∂D) where D is
    the denominator of g, which fixes a finite linear ansatz for the
    numerator.  An inconsistent system means the integral has a logarithmic
    part and :class:`NonrationalAntiderivative` is raised.
    """
    if g.is_zero():
        return ZERO
    v = RationalExpr.var(var)
    if not g.den.depends_on(var):
        out = ZERO
        for k, c in g.num.coefficients_in(var).items():
            out = out + RationalExpr(c, g.den) * v ** (k + 1) / (k + 1)
        return out
    den = g.den
    e = _backend.gcd(den, den.diff(var))
    deg_e = e.degree(var) if not e.is_constant() else 0
    bound = max(g.num.degree(var) - den.degree(var) + 1, 0) + deg_e
    e_expr = RationalExpr(e)
    basis = [(v**k / e_expr).diff(var) for k in range(bound + 1)]
    coeffs = solve_function_coefficients(g, basis, var)
    if coeffs is None:
        raise NonrationalAntiderivative(
            f"integral of {g} with respect to {'xupq'[var]} has a logarithmic part"
        )
    out = ZERO
    for k, c in enumerate(coeffs):
        if c:
            out = out + c * v**k
    return out / e_expr


def _normalised(h: RationalExpr) -> RationalExpr:
    lc = h.num.leading_coefficient()
    return h if lc == 1 else h / lc


def _power_product(factors: Sequence[Poly], exponents: Sequence[Fraction], what: str) -> RationalExpr:
    h = ONE
    for d, n in zip(factors, exponents):
        if n.denominator != 1:
            raise AnsatzExhausted(f"{what}: residue {n} at factor {d} is not an integer")
        if n:
            h = h * RationalExpr(d) ** int(n)
    return h


def _factors_of(poly: Poly, vars_: Sequence[int]) -> List[Poly]:
    if poly.is_constant():
        return []
    _, facs = _backend.factor_list(poly)
    return [d for d, _ in facs if any(d.depends_on(v) for v in vars_)]


def log_solve(g: RationalExpr, var: int) -> RationalExpr:
    """Rational h with ∂h/∂var / h == g, as a product of powers of factors of den(g).

    h is fixed up to a factor free of ``var``; the returned one has monic
    numerator.  Raises :class:`AnsatzExhausted` when g is not the logarithmic
    derivative of a rational function (non-integer residues, repeated poles
    or a polynomial part).
    """
    if g.is_zero():
        return ONE
    factors = _factors_of(g.den, [var])
    basis = [RationalExpr(d.diff(var), d) for d in factors]
    sol = solve_constants(-g, basis)
    if sol is None:
        raise AnsatzExhausted(f"{g} is not the {'xupq'[var]}-log-derivative of a rational function")
    return _normalised(_power_product(factors, sol, "log-derivative"))


def log_solve_gradient(r0: RationalExpr, r1: RationalExpr) -> RationalExpr:
    """Rational G(x, u) with G_x/G == r0 and G_u/G == r1.

    Both equations are packed into r0 + p·r1 == (d_x + p·d_u)/d summed over
    factors d, which is equivalent because nothing here depends on p.
    """
    for r in (r0, r1):
        if r.depends_on(P) or r.depends_on(Q):
            raise ValueError("gradient components must be functions of x and u")
    if r0.diff(U) != r1.diff(X):
        raise NotExact(f"({r0}, {r1}) is not a gradient field")
    if r0.is_zero() and r1.is_zero():
        return ONE
    p = RationalExpr.var(P)
    factors = _factors_of(r0.den * r1.den, [X, U])
    basis = [RationalExpr(d.diff(X) + d.diff(U) * Poly.var(P), d) for d in factors]
    sol = solve_constants(-(r0 + p * r1), basis)
    if sol is None:
        raise AnsatzExhausted(f"({r0}, {r1}) is not the log-gradient of a rational function")
    return _normalised(_power_product(factors, sol, "log-gradient"))


def integrate_gradient(r0: RationalExpr, r1: RationalExpr) -> RationalExpr:
    """Rational F(x, u) with F_x == r0, F_u == r1 (additive constant zero)."""
    if r0.diff(U) != r1.diff(X):
        raise NotExact(f"({r0}, {r1}) fails the cross-derivative check")
    fx = antiderivative(r0, X)
    rest = r1 - fx.diff(U)
    if rest.depends_on(X):
        raise NotExact(f"remainder {rest} of the u-equation still depends on x")
    return fx + antiderivative(rest, U)


def solve_linear_first_order(
    coeff: RationalExpr, rhs: RationalExpr, var: int
) -> Tuple[RationalExpr, RationalExpr]:
    """Solve y_var + coeff·y == rhs: returns (particular, homogeneous).

    General solution is particular + homogeneous·K with K free of ``var``.
    """
    hom = log_solve(-coeff, var)
    part = hom * antiderivative(rhs / hom, var) if not rhs.is_zero() else ZERO
    return part, hom
