"""Point transformations x̄ = φ(x, u), ū = ψ(x, u) and their action on u''' = f."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .auxiliary import AuxTriple
from .invariants import Ode3, total_derivative
from .kernel import P, Q, U, X, RationalExpr
from .kernel.rational import ZERO


class DegenerateTransformError(ValueError):
    """The Jacobian φ_x ψ_u - φ_u ψ_x or the total derivative D_x φ vanishes identically."""


@dataclass(frozen=True)
class PointTransform:
    phi: RationalExpr
    psi: RationalExpr

    def __post_init__(self):
        for name, g in (("phi", self.phi), ("psi", self.psi)):
            if g.depends_on(P) or g.depends_on(Q):
                raise ValueError(f"{name} must depend on x and u only, got {g}")
        if self.jacobian.is_zero():
            raise DegenerateTransformError(
                f"Jacobian of ({self.phi}, {self.psi}) vanishes identically"
            )
        if self.dphi.is_zero():
            raise DegenerateTransformError(f"D_x phi vanishes identically for phi = {self.phi}")

    @cached_property
    def jacobian(self) -> RationalExpr:
        return self.phi.diff(X) * self.psi.diff(U) - self.phi.diff(U) * self.psi.diff(X)

    @cached_property
    def dphi(self) -> RationalExpr:
        return self.phi.diff(X) + RationalExpr.var(P) * self.phi.diff(U)

    @property
    def fibre_preserving(self) -> bool:
        return not self.phi.depends_on(U)

    def __str__(self) -> str:
        return f"(x̄, ū) = ({self.phi}, {self.psi})"


@dataclass(frozen=True)
class Prolongation:
    """ū', ū'' in jet coordinates, and ū''' = A + B·u''' along solutions."""

    ubar1: RationalExpr
    ubar2: RationalExpr
    A: RationalExpr
    B: RationalExpr


def _d0(g: RationalExpr) -> RationalExpr:
    # total derivative without the u''' term
    p = RationalExpr.var(P)
    q = RationalExpr.var(Q)
    return g.diff(X) + p * g.diff(U) + q * g.diff(P)


def prolong(t: PointTransform) -> Prolongation:
    """Third prolongation of ``t``.

    ū''' is affine in the symbol u''' (written t here), so instead of
    extending the kernel with a fifth variable the two coefficients are
    computed separately: D_x ū'' = D0 ū'' + t ∂_q ū''.
    """
    return _prolong_raw(t.psi, t.dphi)


def _prolong_raw(psi: RationalExpr, dphi: RationalExpr) -> Prolongation:
    # no nondegeneracy check: also used for the part linear in psi
    ubar1 = _d0(psi) / dphi
    ubar2 = _d0(ubar1) / dphi
    A = _d0(ubar2) / dphi
    B = ubar2.diff(Q) / dphi
    return Prolongation(ubar1, ubar2, A, B)


def linear_rhs_residual(ode: Ode3, phi: RationalExpr, psi: RationalExpr) -> RationalExpr:
    """A + B·f for the pair (phi, psi), without any nondegeneracy check.

    For fixed phi the result is linear in psi; the completion step of the
    synthesis uses this to correct a candidate psi by a linear solve.
    """
    dphi = phi.diff(X) + RationalExpr.var(P) * phi.diff(U)
    pr = _prolong_raw(psi, dphi)
    return pr.A + pr.B * ode.f


def transformed_rhs_residual(ode: Ode3, t: PointTransform, target: RationalExpr = ZERO) -> RationalExpr:
    """A + B·f - target(φ, ψ, ū', ū''); zero exactly when ``t`` maps u''' = f onto ū''' = target."""
    pr = prolong(t)
    res = pr.A + pr.B * ode.f
    if not target.is_zero():
        res = res - _compose(target, t, pr)
    return res


def verify(ode: Ode3, t: PointTransform) -> bool:
    """True iff ``t`` maps every solution of u''' = f to a solution of ū''' = 0."""
    return transformed_rhs_residual(ode, t).is_zero()


def _compose(target: RationalExpr, t: PointTransform, pr: Prolongation) -> RationalExpr:
    return target.substitute({X: t.phi, U: t.psi, P: pr.ubar1, Q: pr.ubar2})


def pullback(target_f: RationalExpr, t: PointTransform) -> Ode3:
    """The unique u''' = f that ``t`` carries onto ū''' = target_f."""
    pr = prolong(t)
    composed = _compose(target_f, t, pr) if not target_f.is_zero() else ZERO
    return Ode3((composed - pr.A) / pr.B)


def aux_from_transform(t: PointTransform, ode: Ode3 | None = None) -> AuxTriple:
    """Group functions a1 = J / D_xφ, a3 = a1 / D_xφ, a2 = D_x a1 / D_xφ induced by ``t``.

    a1 is free of q, so the source right-hand side never enters D_x a1;
    ``ode`` is accepted only so the call mirrors the residual checks.
    """
    f = ode.f if ode is not None else ZERO
    a1 = t.jacobian / t.dphi
    a3 = a1 / t.dphi
    a2 = total_derivative(a1, f) / t.dphi
    return AuxTriple(a1, a2, a3)


IDENTITY = PointTransform(RationalExpr.var(X), RationalExpr.var(U))
