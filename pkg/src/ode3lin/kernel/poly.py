"""Sparse multivariate polynomials over Q in the four jet variables x, u, p, q."""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Exponent = Tuple[int, int, int, int]
Scalar = Union[int, Fraction]

NVARS = 4
ZERO_EXP: Exponent = (0, 0, 0, 0)


class JetVar(IntEnum):
    """Coordinates on second-order jet space; p stands for u', q for u''."""

    X = 0
    U = 1
    P = 2
    Q = 3

    @property
    def symbol(self) -> str:
        return "xupq"[self]


def monomial_key(e: Exponent) -> Tuple[int, int, int, int, int]:
    """Graded-lex sort key; q is the most significant variable, x the least."""
    return (e[0] + e[1] + e[2] + e[3], e[3], e[2], e[1], e[0])


def _unit(var: int, power: int = 1) -> Exponent:
    e = [0, 0, 0, 0]
    e[var] = power
    return tuple(e)  # type: ignore[return-value]


class Poly:
    """Immutable polynomial stored as ``{exponent vector: nonzero Fraction}``.

    Equality is structural, which is sound because zero coefficients are
    never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[tuple(e)] = Fraction(c)  # type: ignore[index]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction]) -> "Poly":
        # caller guarantees: Fraction coefficients, no zeros
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls._raw({ZERO_EXP: Fraction(c)} if c else {})

    @classmethod
    def var(cls, v: int, power: int = 1) -> "Poly":
        return cls._raw({_unit(v, power): Fraction(1)})

    @classmethod
    def monomial(cls, e: Sequence[int], c: Scalar = 1) -> "Poly":
        return cls._raw({tuple(e): Fraction(c)} if c else {})  # type: ignore[dict-item]

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Exponent, Fraction]]:
        return self._terms.items()

    def sorted_terms(self, descending: bool = True) -> list:
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]), reverse=descending)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Exponent]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ZERO_EXP in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(ZERO_EXP, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=monomial_key)
        return e, self._terms[e]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def degree(self, var: int | None = None) -> int:
        """Degree in ``var`` (total degree when omitted); -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        return max(e[var] for e in self._terms)

    def min_degree(self, var: int) -> int:
        return min(e[var] for e in self._terms) if self._terms else 0

    def depends_on(self, var: int) -> bool:
        return any(e[var] for e in self._terms)

    def variables(self) -> Tuple[JetVar, ...]:
        return tuple(v for v in JetVar if self.depends_on(v))

    def coefficients_in(self, var: int) -> Dict[int, "Poly"]:
        """Split into ``{k: c_k}`` with ``self == sum(c_k * var**k)`` and c_k free of var."""
        out: Dict[int, Dict[Exponent, Fraction]] = {}
        for e, c in self._terms.items():
            k = e[var]
            rest = list(e)
            rest[var] = 0
            out.setdefault(k, {})[tuple(rest)] = c  # type: ignore[index]
        return {k: Poly._raw(t) for k, t in out.items()}

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(other: object) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self._terms.items()})

    def __add__(self, other: object) -> "Poly":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(o._terms) > len(self._terms):
            big, small = dict(o._terms), self._terms
        else:
            big, small = dict(self._terms), o._terms
        for e, c in small.items():
            s = big.get(e)
            if s is None:
                big[e] = c
            else:
                s += c
                if s:
                    big[e] = s
                else:
                    del big[e]
        return Poly._raw(big)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Poly":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw({})
        if c == 1:
            return self
        return Poly._raw({e: v * c for e, v in self._terms.items()})

    def __mul__(self, other: object) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly._raw({})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((eb, cb),) = b.items()
            return Poly._raw(
                {(e[0] + eb[0], e[1] + eb[1], e[2] + eb[2], e[3] + eb[3]): c * cb for e, c in a.items()}
            )
        # accumulate numerators over a common integer denominator to avoid
        # Fraction normalisation in the inner loop
        da = _common_denominator(a.values())
        db = _common_denominator(b.values())
        ia = [(e, int(c * da)) for e, c in a.items()]
        ib = [(e, int(c * db)) for e, c in b.items()]
        acc: Dict[Exponent, int] = {}
        get = acc.get
        for ea, ca in ia:
            a0, a1, a2, a3 = ea
            for eb, cb in ib:
                key = (a0 + eb[0], a1 + eb[1], a2 + eb[2], a3 + eb[3])
                acc[key] = get(key, 0) + ca * cb
        den = da * db
        return Poly._raw({e: Fraction(c, den) for e, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("Poly exponent must be a non-negative integer")
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def diff(self, var: int) -> "Poly":
        out: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                ne = list(e)
                ne[var] = k - 1
                out[tuple(ne)] = c * k  # type: ignore[index]
        return Poly._raw(out)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        vals = [Fraction(v) for v in point]
        if len(vals) != NVARS:
            raise ValueError("evaluation point needs four coordinates")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v**k
            total += term
        return total

    def content(self) -> Fraction:
        """Positive rational g with all coefficients of self/g integers and coprime."""
        if not self._terms:
            return Fraction(0)
        from math import gcd

        den = _common_denominator(self._terms.values())
        g = 0
        for c in self._terms.values():
            g = gcd(g, int(c * den))
        return Fraction(g, den)

    def monic(self) -> "Poly":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient())

    def monomial_gcd(self) -> Exponent:
        """Componentwise minimum exponent over all terms."""
        it = iter(self._terms)
        m = list(next(it))
        for e in it:
            for i in range(NVARS):
                if e[i] < m[i]:
                    m[i] = e[i]
        return tuple(m)  # type: ignore[return-value]

    def shift_down(self, e: Exponent) -> "Poly":
        """Divide by the monomial with exponent ``e`` (must divide every term)."""
        return Poly._raw(
            {(a[0] - e[0], a[1] - e[1], a[2] - e[2], a[3] - e[3]): c for a, c in self._terms.items()}
        )

    def substitute_poly(self, values: Mapping[int, "Poly"]) -> "Poly":
        """Replace variables by polynomials (simultaneously)."""
        cache: Dict[Tuple[int, int], Poly] = {}

        def power(v: int, k: int) -> Poly:
            key = (v, k)
            if key not in cache:
                cache[key] = values[v] ** k
            return cache[key]

        total = Poly._raw({})
        for e, c in self._terms.items():
            kept = [0, 0, 0, 0]
            term = Poly.constant(c)
            for v in range(NVARS):
                if e[v] and v in values:
                    term = term * power(v, e[v])
                else:
                    kept[v] = e[v]
            if any(kept):
                term = term * Poly.monomial(kept)
            total = total + term
        return total

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def _common_denominator(coeffs: Iterable[Fraction]) -> int:
    from math import lcm

    d = 1
    for c in coeffs:
        d = lcm(d, c.denominator)
    return d


def _format_monomial(e: Exponent) -> str:
    parts = []
    for v, k in zip("xupq", e):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_poly(poly: Poly) -> str:
    """Expanded text in descending monomial order, re-parseable by the kernel parser."""
    if poly.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(poly.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(e)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)
