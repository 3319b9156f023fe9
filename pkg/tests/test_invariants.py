import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ode3lin.invariants import (
    InvariantReport,
    Ode3,
    Verdict,
    classify,
    invariants,
    is_quadratic_in_q,
    s_quantities,
    total_derivative,
)
from ode3lin.kernel import P, Q, U, X, RationalExpr, parse

from .strategies import EX31, EX32, EX33, i3_s_form, random_rhs, rationals

x, u, p, q = (RationalExpr.var(v) for v in (X, U, P, Q))
ZERO = RationalExpr(0)


def test_total_derivative_definition_terms():
    f = 3 * q**2 / (1 + p)
    assert total_derivative(u, f) == p
    assert total_derivative(q, f) == f
    assert total_derivative(6 * q / (1 + p), f) == 12 * q**2 / (1 + p) ** 2


def test_s_quantities():
    assert s_quantities(Ode3(ZERO)) == (ZERO, ZERO, ZERO)
    s1, _, _ = s_quantities(Ode3.parse(EX31))
    assert s1 == 6 * p / u + 3 / x
    s1, _, s3 = s_quantities(Ode3.parse(EX32))
    assert s1 == 6 * q / (1 + p)
    assert s3 == 6 / (1 + p)


@pytest.mark.parametrize("text", [EX31, EX32, "0", "x"])
def test_maximally_symmetric_examples(text):
    rep = invariants(Ode3.parse(text))
    assert rep.values == (ZERO,) * 4
    assert rep.vanishing == (True,) * 4
    assert rep.verdict is Verdict.MAXIMALLY_SYMMETRIC
    assert rep.witness is None


def test_example_with_six_symmetries():
    rep = invariants(Ode3.parse(EX33))
    # independent differentiation: f_qq = 3/p, f_pqq = -3/p^2
    assert rep.i1.is_zero()
    assert rep.i2 == (3 / p) ** 2 + 6 * (-3 / p**2)
    assert rep.i2 == parse("-9/p^2")
    assert rep.verdict is Verdict.NOT_MAXIMALLY_SYMMETRIC
    assert rep.witness == 2


def test_linear_in_q_gives_i3_equal_4():
    rep = invariants(Ode3(q))
    assert rep.i1.is_zero() and rep.i2.is_zero()
    assert rep.i3 == RationalExpr(4)
    assert rep.witness == 3
    assert classify(Ode3(q)) is Verdict.NOT_MAXIMALLY_SYMMETRIC


def test_report_is_consistent():
    rep = InvariantReport(ZERO, ZERO, x, ZERO)
    assert rep.vanishing == (True, True, False, True)
    assert rep.verdict is Verdict.NOT_MAXIMALLY_SYMMETRIC and rep.witness == 3


def test_i3_forms_agree_on_random_rhs():
    rng = random.Random(20240501)
    for _ in range(50):
        f = random_rhs(rng)
        assert invariants(Ode3(f), cross_check=False).i3 == i3_s_form(f)


@given(st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_cross_checked_forms_never_disagree(rng):
    # invariants() raises FormulaMismatch if any s-form disagrees
    invariants(Ode3(random_rhs(rng)))


@given(rationals(max_terms=3))
@settings(max_examples=100, deadline=None)
def test_vanishing_i1_means_quadratic_in_q(f):
    i1 = f.diff(Q).diff(Q).diff(Q)  # I1 by definition; the full report is not needed
    if i1.is_zero():
        assert is_quadratic_in_q(f)
        assert f.num.degree(Q) - f.den.degree(Q) <= 2
