"""Exact linear algebra over Q and over the field of rational expressions."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import _backend
from .poly import Exponent, Poly
from .rational import RationalExpr


def rref(rows: List[List[Any]], ncols: int) -> Tuple[List[List[Any]], List[int]]:
    """Reduced row echelon form of an augmented-or-plain matrix.

    Works for any field whose elements support ``+ - * /`` and truthiness as
    a zero test (``Fraction`` and ``RationalExpr`` both qualify).  Only the
    first ``ncols`` columns are used as pivot candidates, scanned left to
    right, so earlier columns are preferred as pivots.
    """
    m = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def solve_linear(rows: List[List[Any]], rhs: Sequence[Any], zero: Any) -> Optional[List[Any]]:
    """Solve ``rows @ x = rhs``; free unknowns are set to ``zero``.  None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(aug, n)
    for row in m[len(pivots):]:
        if row[n]:
            return None
    sol = [zero] * n
    for i, c in enumerate(pivots):
        sol[c] = m[i][n]
    return sol


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a == b or b.is_constant():
        return a
    if a.is_constant():
        return b
    return _backend.exquo(a * b, _backend.gcd(a, b)).monic()


def common_denominator(exprs: Sequence[RationalExpr]) -> Poly:
    den = Poly.constant(1)
    for e in exprs:
        den = poly_lcm(den, e.den)
    return den


def scaled_numerators(exprs: Sequence[RationalExpr]) -> List[Poly]:
    """Numerators of ``exprs`` brought over their least common denominator."""
    den = common_denominator(exprs)
    out = []
    for e in exprs:
        if e.den == den:
            out.append(e.num)
        else:
            out.append(e.num * _backend.exquo(den, e.den))
    return out


def solve_constants(
    base: RationalExpr, basis: Sequence[RationalExpr]
) -> Optional[List[Fraction]]:
    """Find rational constants ``c`` with ``base + sum(c_j * basis_j) == 0`` identically.

    The identity is split into one linear equation per monomial of the
    cleared numerator.  Free constants are set to 0, so with a basis sorted
    from simple to complex the simplest particular solution is returned.
    Returns None when no constant solution exists.
    """
    if not basis:
        return [] if base.is_zero() else None
    nums = scaled_numerators([base, *basis])
    monomials: Dict[Exponent, int] = {}
    for n in nums:
        for e in n:
            monomials.setdefault(e, len(monomials))
    if not monomials:
        return [Fraction(0)] * len(basis)
    rows = [[Fraction(0)] * len(basis) for _ in monomials]
    rhs = [Fraction(0)] * len(monomials)
    for e, c in nums[0].items():
        rhs[monomials[e]] = -c
    for j, n in enumerate(nums[1:]):
        for e, c in n.items():
            rows[monomials[e]][j] = c
    return solve_linear(rows, rhs, Fraction(0))
