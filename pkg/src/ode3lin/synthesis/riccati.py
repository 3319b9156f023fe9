"""Rational solutions of scalar first-order equations quadratic in the unknown.

Each equation ("row") has the form ``d·F' + a·F² + b·F + c = 0`` with
coefficients rational in one variable s.  The unknown F is searched as N/M
with deg N, deg M ≤ D and M monic; the coefficients come from equating the
cleared residual to zero and solving the resulting polynomial system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

import sympy

from ..kernel import Poly, RationalExpr
from ..kernel.linalg import scaled_numerators
from ..kernel.rational import ZERO
from .errors import RiccatiUnsolved


@dataclass(frozen=True)
class QuadraticRow:
    """d·F' + a·F² + b·F + c == 0, all coefficients functions of one variable."""

    d: RationalExpr
    a: RationalExpr
    b: RationalExpr
    c: RationalExpr

    def is_trivial(self) -> bool:
        return all(k.is_zero() for k in (self.d, self.a, self.b, self.c))

    def residual(self, F: RationalExpr, var: int) -> RationalExpr:
        return self.d * F.diff(var) + self.a * F * F + self.b * F + self.c

    def describe(self, name: str = "F2", var: str = "s") -> str:
        if self.d.is_zero():
            return f"({self.a})*{name}^2 + ({self.b})*{name} + ({self.c}) = 0"
        parts = []
        for coeff, mono in ((self.a, f"{name}^2"), (self.b, name), (self.c, "1")):
            k = -coeff / self.d
            if k:
                parts.append(f"({k})*{mono}" if mono != "1" else f"({k})")
        rhs = " + ".join(parts) if parts else "0"
        return f"d{name}/d{var} = {rhs}"


def _univariate(poly: Poly, var: int) -> List[Fraction]:
    """Dense coefficient list (lowest degree first) of a polynomial in ``var`` only."""
    coeffs = poly.coefficients_in(var)
    out = [Fraction(0)] * (max(coeffs) + 1 if coeffs else 1)
    for k, c in coeffs.items():
        if not c.is_constant():
            raise ValueError(f"coefficient {c} depends on more than one variable")
        out[k] = c.constant_value()
    return out


def _sympy_rows(rows: Sequence[QuadraticRow], var: int, s: sympy.Symbol):
    out = []
    for row in rows:
        nums = scaled_numerators([row.d, row.a, row.b, row.c])
        out.append(
            [
                sum(sympy.Rational(c.numerator, c.denominator) * s**k for k, c in enumerate(_univariate(n, var)))
                for n in nums
            ]
        )
    return out


def shapes(max_degree: int) -> Iterator[Tuple[int, int]]:
    """(deg N, deg M) pairs in search order: total degree first, then deg M."""
    for total in range(2 * max_degree + 1):
        for dm in range(min(total, max_degree) + 1):
            dn = total - dm
            if dn <= max_degree:
                yield dn, dm


def _height(F: RationalExpr) -> Tuple[int, int, str]:
    coeffs = [c for _, c in F.num.items()] + [c for _, c in F.den.items()]
    h = max((max(abs(c.numerator), c.denominator) for c in coeffs), default=0)
    return (h, len(F.num) + len(F.den), str(F))


def _to_expr(poly: sympy.Expr, s: sympy.Symbol, var: int) -> RationalExpr:
    sp = sympy.Poly(poly, s)
    terms = {}
    for (k,), c in sp.terms():
        e = [0, 0, 0, 0]
        e[var] = k
        terms[tuple(e)] = Fraction(int(c.p), int(c.q))
    return RationalExpr(Poly(terms))


def solve_rows(rows: Sequence[QuadraticRow], var: int, max_degree: int = 4) -> RationalExpr:
    """First rational F(s) (in slot ``var``) satisfying every row.

    Constant candidates come first, then shapes of growing total degree.
    Within one shape the solution of smallest coefficient height wins, which
    makes the choice deterministic when a shape admits several solutions.
    Raises :class:`RiccatiUnsolved` if nothing is found up to ``max_degree``.
    """
    rows = [r for r in rows if not r.is_trivial()]
    if not rows:
        return ZERO
    s = sympy.Symbol("s")
    srows = _sympy_rows(rows, var, s)
    for dn, dm in shapes(max_degree):
        leads = _leading_values(srows, s, dn, dm)
        if leads is None:
            found = _solve_shape(srows, s, dn, dm, None)
        else:
            found = [sol for lead in sorted(leads) for sol in _solve_shape(srows, s, dn, dm, lead)]
        candidates = []
        for N, M in found:
            F = _to_expr(N, s, var) / _to_expr(M, s, var)
            if all(r.residual(F, var).is_zero() for r in rows):
                candidates.append(F)
        if candidates:
            return min(set(candidates), key=_height)
    raise RiccatiUnsolved(
        f"no rational solution with numerator/denominator degree <= {max_degree}"
    )


def _degree(poly: sympy.Expr, s: sympy.Symbol) -> int:
    return -1 if poly == 0 else sympy.degree(poly, s)


def _leading_values(srows, s: sympy.Symbol, dn: int, dm: int):
    """Admissible leading coefficients of N for exact degrees (dn, dm).

    The top coefficient of each cleared residual is a polynomial of degree
    <= 2 in lc(N) alone (M is monic), so its rational roots bound the search.
    Returns None when no row constrains it, otherwise a (possibly empty) set.
    """
    z = sympy.Symbol("z")
    allowed = None
    for row in srows:
        d, a, b, c = row
        terms = []
        if d != 0 and dn + dm > 0:
            terms.append((_degree(d, s) + dn + dm - 1, sympy.LC(d, s) * (dn - dm) * z))
        if a != 0:
            terms.append((_degree(a, s) + 2 * dn, sympy.LC(a, s) * z**2))
        if b != 0:
            terms.append((_degree(b, s) + dn + dm, sympy.LC(b, s) * z))
        if c != 0:
            terms.append((_degree(c, s) + 2 * dm, sympy.LC(c, s)))
        if not terms:
            continue
        top = max(t for t, _ in terms)
        lead = sympy.expand(sum(v for t, v in terms if t == top))
        if lead == 0:
            continue
        roots = set(sympy.Poly(lead, z).ground_roots()) if lead.has(z) else set()
        if dn > 0:
            roots.discard(0)
        allowed = roots if allowed is None else allowed & roots
        if not allowed:
            return set()
    return allowed


def _solve_shape(srows, s, dn: int, dm: int, lead) -> List[Tuple[sympy.Expr, sympy.Expr]]:
    n = list(sympy.symbols(f"n0:{dn + 1}"))
    m = sympy.symbols(f"m0:{dm}") if dm else ()
    if lead is not None:
        n[dn] = lead
    N = sum(n[i] * s**i for i in range(dn + 1))
    M = s**dm + sum(m[j] * s**j for j in range(dm))
    dN, dM = sympy.diff(N, s), sympy.diff(M, s)
    eqs = set()
    for d, a, b, c in srows:
        res = sympy.expand(d * (dN * M - N * dM) + a * N**2 + b * N * M + c * M**2)
        if res == 0:
            continue
        for coeff in sympy.Poly(res, s).coeffs():
            if coeff != 0:
                eqs.add(coeff)
    unknowns = [v for v in n if isinstance(v, sympy.Symbol)] + list(m)
    if not eqs:
        sols = [{}]
    else:
        try:
            sols = sympy.solve(list(eqs), unknowns, dict=True)
        except NotImplementedError:
            return []
    out = []
    for sol in sols:
        free = {v: 0 for v in unknowns if v not in sol}
        vals = {v: sympy.sympify(sol.get(v, 0)).subs(free) for v in unknowns}
        if not all(val.is_Rational for val in vals.values()):
            continue
        if dn and N.coeff(s, dn).subs(vals) == 0:
            continue  # lower numerator degree: already covered by an earlier shape
        Nv = sympy.expand(N.subs(vals))
        Mv = sympy.expand(M.subs(vals))
        if Mv == 0:
            continue
        out.append((Nv, Mv))
    return out

