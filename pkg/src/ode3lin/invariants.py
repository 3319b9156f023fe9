"""Relative invariants of u''' = f(x, u, u', u'') and the seven-symmetry verdict."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .kernel import P, Q, U, X, RationalExpr, parse
from .kernel.rational import ZERO


@dataclass(frozen=True)
class Ode3:
    """The third-order equation u''' = f, stored by its right-hand side."""

    f: RationalExpr

    @classmethod
    def parse(cls, text: str) -> "Ode3":
        return cls(parse(text))

    def __str__(self) -> str:
        return f"u''' = {self.f}"


class Verdict(str, Enum):
    MAXIMALLY_SYMMETRIC = "MaximallySymmetric"
    NOT_MAXIMALLY_SYMMETRIC = "NotMaximallySymmetric"


class FormulaMismatch(RuntimeError):
    """The two published forms of an invariant disagreed (should never happen)."""


def total_derivative(g: RationalExpr, f: RationalExpr) -> RationalExpr:
    """D_x g = g_x + p g_u + q g_p + f g_q along solutions of u''' = f."""
    p = RationalExpr.var(P)
    q = RationalExpr.var(Q)
    out = g.diff(X) + p * g.diff(U) + q * g.diff(P)
    if g.depends_on(Q):
        out = out + f * g.diff(Q)
    return out


def s_quantities(ode: Ode3) -> Tuple[RationalExpr, RationalExpr, RationalExpr]:
    """The normalisation quantities (s1, s2, s3) = (f_q, 2 f_q^2 + 9 f_p - 3 D_x f_q, f_qq)."""
    f = ode.f
    fq = f.diff(Q)
    s2 = 2 * fq * fq + 9 * f.diff(P) - 3 * total_derivative(fq, f)
    return fq, s2, fq.diff(Q)


@dataclass(frozen=True)
class InvariantReport:
    i1: RationalExpr
    i2: RationalExpr
    i3: RationalExpr
    i4: RationalExpr

    @property
    def values(self) -> Tuple[RationalExpr, ...]:
        return (self.i1, self.i2, self.i3, self.i4)

    @property
    def vanishing(self) -> Tuple[bool, ...]:
        return tuple(i.is_zero() for i in self.values)

    @property
    def verdict(self) -> Verdict:
        if all(self.vanishing):
            return Verdict.MAXIMALLY_SYMMETRIC
        return Verdict.NOT_MAXIMALLY_SYMMETRIC

    @property
    def witness(self) -> Optional[int]:
        """1-based index of the first invariant that does not vanish."""
        for k, zero in enumerate(self.vanishing, start=1):
            if not zero:
                return k
        return None


def invariants(ode: Ode3, cross_check: bool = True) -> InvariantReport:
    """Compute I1..I4 directly from f.

    With ``cross_check`` the same quantities are recomputed from s1, s2, s3
    and compared exactly; a disagreement raises :class:`FormulaMismatch`.
    """
    f = ode.f
    fq, fp, fu = f.diff(Q), f.diff(P), f.diff(U)
    fqq = fq.diff(Q)
    dfq = total_derivative(fq, f)
    dfp = total_derivative(fp, f)

    i1 = fqq.diff(Q)
    i2 = fqq * fqq + 6 * fqq.diff(P)
    i3 = (
        4 * fq**3
        + 18 * fq * (fp - dfq)
        + 9 * total_derivative(dfq, f)
        - 27 * dfp
        + 54 * fu
    )
    fpq = fq.diff(P)
    i4 = fqq * (fq * fq + 9 * fp - 3 * dfq) - 9 * fp.diff(P) + 18 * fu.diff(Q) - 6 * fq * fpq
    report = InvariantReport(i1, i2, i3, i4)

    if cross_check:
        s1, s2, s3 = s_quantities(ode)
        alt = (
            s3.diff(Q),
            s3 * s3 + 6 * s3.diff(P),
            2 * s1 * s2 - 3 * total_derivative(s2, f) + 54 * fu,
            s3 * (s2 - s1 * s1) - 9 * fp.diff(P) + 18 * fu.diff(Q) - 6 * s1 * s1.diff(P),
        )
        for k, (a, b) in enumerate(zip(report.values, alt), start=1):
            if a != b:
                raise FormulaMismatch(f"I{k}: f-form {a} != s-form {b}")
    return report


def classify(ode: Ode3) -> Verdict:
    """Whether u''' = f is point-equivalent to u''' = 0."""
    return invariants(ode).verdict


def is_quadratic_in_q(f: RationalExpr) -> bool:
    return not f.den.depends_on(Q) and f.num.degree(Q) <= 2


__all__ = [
    "Ode3",
    "Verdict",
    "InvariantReport",
    "FormulaMismatch",
    "total_derivative",
    "s_quantities",
    "invariants",
    "classify",
    "ZERO",
]
