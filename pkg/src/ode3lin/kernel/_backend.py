"""Bridge to sympy's sparse polynomial ring for gcd, exact division and factoring.

Only these three operations are delegated; everything else in the kernel
works on :class:`Poly` directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from sympy import QQ, ring

from .poly import Poly

_RING, *_GENS = ring("x,u,p,q", QQ)


def to_ring(poly: Poly):
    return _RING.from_dict({e: QQ(c.numerator, c.denominator) for e, c in poly.items()})


def from_ring(elem) -> Poly:
    return Poly._raw(
        {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in elem.items() if c}
    )


def cancel(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Remove the polynomial gcd of ``num`` and ``den`` (scaling is left to the caller)."""
    p, q = to_ring(num).cancel(to_ring(den))
    return from_ring(p), from_ring(q)


def gcd(a: Poly, b: Poly) -> Poly:
    return from_ring(to_ring(a).gcd(to_ring(b)))


def exquo(a: Poly, b: Poly) -> Poly:
    """Exact quotient; raises ``ArithmeticError`` if ``b`` does not divide ``a``."""
    try:
        return from_ring(to_ring(a).exquo(to_ring(b)))
    except Exception as exc:  # sympy raises ExactQuotientFailed
        raise ArithmeticError(f"{b} does not divide {a}") from exc


def factor_list(poly: Poly) -> Tuple[Fraction, List[Tuple[Poly, int]]]:
    """Irreducible factorisation over Q: ``(unit, [(factor, multiplicity), ...])``."""
    unit, factors = to_ring(poly).factor_list()
    return (
        Fraction(int(unit.numerator), int(unit.denominator)),
        [(from_ring(f), k) for f, k in factors],
    )
