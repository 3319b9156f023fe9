"""Canonical rational functions in (x, u, p, q) over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple, Union

from . import _backend
from .poly import NVARS, JetVar, Poly, format_poly


class SingularPointError(ZeroDivisionError):
    """Evaluation at a point where the denominator vanishes."""


Coercible = Union["RationalExpr", Poly, int, Fraction]


class RationalExpr:
    """An immutable quotient ``num/den`` kept in canonical form.

    Canonical means: ``gcd(num, den) = 1`` and ``den`` has leading coefficient 1
    in the kernel's graded-lex order.  Two expressions denote the same rational
    function exactly when they compare equal, so ``is_zero`` is a structural
    test on the numerator.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly | int | Fraction, den: Poly | int | Fraction = 1):
        n = num if isinstance(num, Poly) else Poly.constant(num)
        d = den if isinstance(den, Poly) else Poly.constant(den)
        self.num, self.den = _canonical(n, d)
        self._hash = None

    @classmethod
    def _trusted(cls, num: Poly, den: Poly) -> "RationalExpr":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def var(cls, v: int) -> "RationalExpr":
        return cls._trusted(Poly.var(v), _ONE_POLY)

    @classmethod
    def coerce(cls, value: Coercible) -> "RationalExpr":
        if isinstance(value, RationalExpr):
            return value
        if isinstance(value, Poly):
            return cls._trusted(value, _ONE_POLY)
        if isinstance(value, (int, Fraction)):
            return cls._trusted(Poly.constant(value), _ONE_POLY)
        raise TypeError(f"cannot convert {type(value).__name__} to RationalExpr")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def depends_on(self, var: int) -> bool:
        return self.num.depends_on(var) or self.den.depends_on(var)

    def variables(self) -> Tuple[JetVar, ...]:
        return tuple(v for v in JetVar if self.depends_on(v))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = RationalExpr.coerce(other)
        if not isinstance(other, RationalExpr):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- field operations ---------------------------------------------------

    def __neg__(self) -> "RationalExpr":
        return RationalExpr._trusted(-self.num, self.den)

    def __add__(self, other: Coercible) -> "RationalExpr":
        try:
            o = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            if self.den.is_constant():
                return RationalExpr._trusted(self.num + o.num, _ONE_POLY)
            return RationalExpr(self.num + o.num, self.den)
        if o.den.is_constant():
            # gcd(n1 + n2*d1, d1) == gcd(n1, d1) == 1
            return RationalExpr._trusted(self.num + o.num * self.den, self.den)
        if self.den.is_constant():
            return RationalExpr._trusted(o.num + self.num * o.den, o.den)
        return RationalExpr(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other: Coercible) -> "RationalExpr":
        try:
            o = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Coercible) -> "RationalExpr":
        return RationalExpr.coerce(other) - self

    def __mul__(self, other: Coercible) -> "RationalExpr":
        try:
            o = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return ZERO
        if o.is_constant():
            return RationalExpr._trusted(self.num.scale(o.num.constant_value()), self.den)
        if self.is_constant():
            return RationalExpr._trusted(o.num.scale(self.num.constant_value()), o.den)
        # cross-cancel so the product needs no further gcd
        n1, d2 = _reduce_pair(self.num, o.den)
        n2, d1 = _reduce_pair(o.num, self.den)
        num = n1 * n2
        den = d1 * d2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        return RationalExpr._trusted(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalExpr":
        if self.num.is_zero():
            raise ZeroDivisionError("division by the zero expression")
        lc = self.num.leading_coefficient()
        return RationalExpr._trusted(self.den.scale(1 / lc), self.num.scale(1 / lc))

    def __truediv__(self, other: Coercible) -> "RationalExpr":
        try:
            o = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Coercible) -> "RationalExpr":
        return RationalExpr.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalExpr":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        return RationalExpr._trusted(self.num**n, self.den**n)

    # -- calculus -----------------------------------------------------------

    def diff(self, var: int) -> "RationalExpr":
        """Exact partial derivative with respect to ``var``."""
        dn = self.num.diff(var)
        if self.den.is_constant():
            return RationalExpr._trusted(dn, self.den)
        dd = self.den.diff(var)
        if dd.is_zero():
            if dn.is_zero():
                return ZERO
            return RationalExpr(dn, self.den)
        return RationalExpr(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, point: Sequence[int | Fraction]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise SingularPointError(f"denominator {format_poly(self.den)} vanishes at {tuple(point)}")
        return self.num.evaluate(point) / d

    def substitute(self, values: Mapping[int, Coercible]) -> "RationalExpr":
        """Simultaneously replace jet variables by rational expressions."""
        vals = {int(k): RationalExpr.coerce(v) for k, v in values.items()}
        vals = {k: v for k, v in vals.items() if self.depends_on(k)}
        if not vals:
            return self
        nt, nd = _substitute_poly(self.num, vals)
        dt, dd = _substitute_poly(self.den, vals)
        if dt.is_zero():
            raise ZeroDivisionError("substitution makes the denominator vanish")
        return RationalExpr(nt * dd, dt * nd)

    def coefficients_in(self, var: int) -> Dict[int, "RationalExpr"]:
        """Coefficients of powers of ``var``; requires a denominator free of ``var``."""
        if self.den.depends_on(var):
            raise ValueError(f"{self} is not polynomial in {JetVar(var).symbol}")
        return {k: RationalExpr(c, self.den) for k, c in self.num.coefficients_in(var).items()}

    def degree(self, var: int) -> int:
        """Degree in ``var`` of numerator minus that of denominator."""
        return self.num.degree(var) - self.den.degree(var)

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        return format_expr(self)

    def __repr__(self) -> str:
        return f"RationalExpr({format_expr(self)!r})"


def format_expr(expr: RationalExpr) -> str:
    """Canonical printed form: expanded numerator over parenthesised denominator."""
    num = format_poly(expr.num)
    if expr.den.is_constant():
        return num
    if len(expr.num) > 1:
        num = f"({num})"
    return f"{num}/({format_poly(expr.den)})"


_ONE_POLY = Poly.constant(1)


def _normalise(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    lc = den.leading_coefficient()
    if lc != 1:
        inv = 1 / lc
        return num.scale(inv), den.scale(inv)
    return num, den


def _reduce_pair(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Strip the common factor of num and den, without normalising scale."""
    if den.is_constant() or num.is_constant():
        return num, den
    if den.is_monomial() or num.is_monomial():
        m = tuple(min(a, b) for a, b in zip(num.monomial_gcd(), den.monomial_gcd()))
        if any(m):
            return num.shift_down(m), den.shift_down(m)  # type: ignore[arg-type]
        return num, den
    return _backend.cancel(num, den)


def _canonical(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return num, _ONE_POLY
    if den.is_constant():
        return num.scale(1 / den.constant_value()), _ONE_POLY
    num, den = _reduce_pair(num, den)
    if den.is_constant():
        return num.scale(1 / den.constant_value()), _ONE_POLY
    return _normalise(num, den)


def _substitute_poly(poly: Poly, vals: Dict[int, RationalExpr]) -> Tuple[Poly, Poly]:
    """Return (N, D) with poly(vals) == N/D, using only polynomial arithmetic."""
    degs = {v: poly.degree(v) for v in vals}
    cache: Dict[Tuple[int, int, int], Poly] = {}

    def part(v: int, k: int) -> Poly:
        key = (v, k, degs[v])
        if key not in cache:
            r = vals[v]
            cache[key] = r.num**k * r.den ** (degs[v] - k)
        return cache[key]

    total = Poly()
    for e, c in poly.items():
        term = Poly.constant(c)
        rest = list(e)
        for v in vals:
            term = term * part(v, e[v])
            rest[v] = 0
        if any(rest):
            term = term * Poly.monomial(rest)
        total = total + term
    den = _ONE_POLY
    for v in vals:
        if degs[v] > 0:
            den = den * vals[v].den ** degs[v]
    return total, den


ZERO = RationalExpr._trusted(Poly(), _ONE_POLY)
ONE = RationalExpr._trusted(_ONE_POLY, _ONE_POLY)


def symbols() -> Tuple[RationalExpr, RationalExpr, RationalExpr, RationalExpr]:
    """The four jet coordinates ``(x, u, p, q)`` as expressions."""
    return tuple(RationalExpr.var(v) for v in range(NVARS))  # type: ignore[return-value]
