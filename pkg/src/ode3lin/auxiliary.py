"""Residuals of the auxiliary-function system and of the transformation system.

Every equation is written as ``lhs - rhs`` so that a solution makes the
returned expression identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from .invariants import Ode3, s_quantities, total_derivative
from .kernel import P, Q, U, X, RationalExpr


@dataclass(frozen=True)
class AuxTriple:
    a1: RationalExpr
    a2: RationalExpr
    a3: RationalExpr

    def as_dict(self) -> Dict[str, str]:
        return {"a1": str(self.a1), "a2": str(self.a2), "a3": str(self.a3)}


def a3_residual(ode: Ode3, a3: RationalExpr) -> RationalExpr:
    """D_x a3 + (1/3) f_q a3."""
    return total_derivative(a3, ode.f) + ode.f.diff(Q) * a3 / 3


def a2_residual(ode: Ode3, a2: RationalExpr, a3: RationalExpr) -> RationalExpr:
    """D_x a2 - a2^2 / (2 a3) + (1/18) a3 s2."""
    _, s2, _ = s_quantities(ode)
    return total_derivative(a2, ode.f) - a2 * a2 / (2 * a3) + a3 * s2 / 18


def a1_residual(ode: Ode3, a1: RationalExpr, a2: RationalExpr, a3: RationalExpr) -> RationalExpr:
    """D_x a1 - (a2 / a3) a1."""
    return total_derivative(a1, ode.f) - a2 * a1 / a3


def compatibility_residuals(a1: RationalExpr, a3: RationalExpr) -> Dict[str, RationalExpr]:
    """(a1/a3)_pp and (a1^2/a3)_p, both of which must vanish."""
    ratio = a1 / a3
    return {
        "(a1/a3)_pp": ratio.diff(P).diff(P),
        "(a1^2/a3)_p": (a1 * a1 / a3).diff(P),
    }


def a2_structure_residual(ode: Ode3, a2: RationalExpr, a3: RationalExpr) -> RationalExpr:
    """q-derivative of a2 + (1/6) a3 f_qq q; zero when a2 has the required shape."""
    q = RationalExpr.var(Q)
    return (a2 + a3 * ode.f.diff(Q).diff(Q) * q / 6).diff(Q)


def system_residuals(ode: Ode3, aux: AuxTriple) -> Dict[str, RationalExpr]:
    """All five auxiliary equations plus the a2 shape condition."""
    out = {
        "a3": a3_residual(ode, aux.a3),
        "a2": a2_residual(ode, aux.a2, aux.a3),
        "a1": a1_residual(ode, aux.a1, aux.a2, aux.a3),
    }
    out.update(compatibility_residuals(aux.a1, aux.a3))
    out["a2-structure"] = a2_structure_residual(ode, aux.a2, aux.a3)
    return out


def phi_residual(phi: RationalExpr, a1: RationalExpr, a3: RationalExpr) -> RationalExpr:
    """D_x phi - a1/a3."""
    p = RationalExpr.var(P)
    return phi.diff(X) + p * phi.diff(U) - a1 / a3


def psi_residual(phi: RationalExpr, psi: RationalExpr, a1: RationalExpr, a3: RationalExpr) -> RationalExpr:
    """phi_x psi_u - phi_u psi_x - a1^2/a3."""
    return phi.diff(X) * psi.diff(U) - phi.diff(U) * psi.diff(X) - a1 * a1 / a3
