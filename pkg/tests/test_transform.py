import pytest

from ode3lin.auxiliary import (
    AuxTriple,
    a2_structure_residual,
    phi_residual,
    psi_residual,
    system_residuals,
)
from ode3lin.generators import transforms
from ode3lin.invariants import Ode3, Verdict, classify
from ode3lin.kernel import P, Q, U, X, RationalExpr, parse
from ode3lin.transform import (
    IDENTITY,
    DegenerateTransformError,
    PointTransform,
    aux_from_transform,
    linear_rhs_residual,
    prolong,
    pullback,
    transformed_rhs_residual,
    verify,
)

from .strategies import EX31, EX32, EX33

x, u, p, q = (RationalExpr.var(v) for v in (X, U, P, Q))
ZERO = RationalExpr(0)
T31 = PointTransform(x, -1 / (x * u))
T32 = PointTransform(x + u, -x)


def test_identity_prolongation():
    pr = prolong(IDENTITY)
    assert (pr.ubar1, pr.ubar2, pr.A, pr.B) == (p, q, ZERO, RationalExpr(1))


def test_prolongation_is_chain_rule():
    pr = prolong(T31)
    assert pr.ubar1 == (x * p + u) / (x**2 * u**2)
    assert pr.ubar2 == pr.ubar1.diff(X) + p * pr.ubar1.diff(U) + q * pr.ubar1.diff(P)
    assert not pr.B.is_zero()
    assert (pr.A + pr.B * parse(EX31)).is_zero()


def test_verify_examples():
    assert verify(Ode3(ZERO), IDENTITY)
    assert verify(Ode3.parse(EX31), T31)
    assert verify(Ode3.parse(EX32), T32)
    assert not verify(Ode3.parse(EX32), IDENTITY)


def test_scaled_psi_also_verifies():
    for c in (1, 2, -5):
        assert verify(Ode3.parse(EX31), PointTransform(x, RationalExpr(c) / (x * u)))


def test_pullback_examples():
    assert pullback(ZERO, IDENTITY).f == ZERO
    assert pullback(ZERO, T31).f == parse(EX31)
    assert pullback(ZERO, T32).f == parse(EX32)


def test_pullback_of_nonzero_target():
    target = parse(EX33)
    ode = pullback(target, T32)
    assert transformed_rhs_residual(ode, T32, target).is_zero()
    assert pullback(target, IDENTITY).f == target


@pytest.mark.parametrize(
    "phi, psi",
    [(x, x), (u, u), (x * u, x * u), (x + u, 2 * x + 2 * u)],
)
def test_degenerate_jacobian_rejected(phi, psi):
    with pytest.raises(DegenerateTransformError):
        PointTransform(phi, psi)


def test_jet_dependent_maps_rejected():
    with pytest.raises(ValueError):
        PointTransform(x, p)


def test_aux_examples():
    aux = aux_from_transform(T31, Ode3.parse(EX31))
    assert aux == AuxTriple(1 / (x * u**2), -2 * p / (x * u**3) - 1 / (x**2 * u**2), 1 / (x * u**2))
    aux = aux_from_transform(T32, Ode3.parse(EX32))
    assert aux == AuxTriple(1 / (1 + p), -q / (1 + p) ** 3, 1 / (1 + p) ** 2)
    assert aux_from_transform(IDENTITY, Ode3(ZERO)) == AuxTriple(RationalExpr(1), ZERO, RationalExpr(1))


def test_aux_values_solve_the_transformation_system():
    aux = aux_from_transform(T32, Ode3.parse(EX32))
    assert phi_residual(T32.phi, aux.a1, aux.a3).is_zero()
    assert psi_residual(T32.phi, T32.psi, aux.a1, aux.a3).is_zero()


def test_linear_rhs_residual_is_linear_in_psi():
    ode = Ode3.parse("x*u + q")
    g1, g2 = x**2 * u, 1 / (x + u)
    lhs = linear_rhs_residual(ode, x + u, 2 * g1 - 3 * g2)
    rhs = 2 * linear_rhs_residual(ode, x + u, g1) - 3 * linear_rhs_residual(ode, x + u, g2)
    assert lhs == rhs


@pytest.mark.parametrize("t", list(transforms(25, seed=11)), ids=str)
def test_generated_round_trip_and_aux_consistency(t):
    ode = pullback(ZERO, t)
    assert verify(ode, t)
    assert classify(ode) is Verdict.MAXIMALLY_SYMMETRIC
    aux = aux_from_transform(t, ode)
    assert all(r.is_zero() for r in system_residuals(ode, aux).values())
    assert a2_structure_residual(ode, aux.a2, aux.a3).is_zero()


@pytest.mark.parametrize("t", list(transforms(12, seed=5)), ids=str)
def test_nonvanishing_branch_is_preserved(t):
    target = parse(EX33)
    ode = pullback(target, t)
    assert transformed_rhs_residual(ode, t, target).is_zero()
    assert classify(ode) is Verdict.NOT_MAXIMALLY_SYMMETRIC
