from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from ode3lin.kernel import (
    ONE,
    P,
    Q,
    U,
    X,
    JetVar,
    Poly,
    RationalExpr,
    SingularPointError,
    monomial_key,
    parse,
)

from .strategies import points, polys, rationals, safe_eval

x, u, p, q = (RationalExpr.var(v) for v in (X, U, P, Q))

PROPS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_four_ordered_jet_variables():
    assert list(JetVar) == [X, U, P, Q]
    assert X < U < P < Q
    assert [v.symbol for v in JetVar] == ["x", "u", "p", "q"]


def test_graded_order_puts_q_highest():
    assert monomial_key((0, 0, 0, 2)) > monomial_key((1, 0, 0, 0))
    assert monomial_key((0, 0, 0, 1)) > monomial_key((0, 0, 1, 0)) > monomial_key((0, 1, 0, 0)) > monomial_key((1, 0, 0, 0))
    poly = Poly({(1, 0, 0, 0): Fraction(1), (0, 0, 0, 1): Fraction(2), (0, 0, 0, 0): Fraction(3)})
    assert [e for e, _ in poly.sorted_terms()] == [(0, 0, 0, 1), (1, 0, 0, 0), (0, 0, 0, 0)]


def test_poly_stores_no_zero_coefficients():
    poly = Poly.var(X) - Poly.var(X) + Poly.constant(2)
    assert list(poly.items()) == [((0, 0, 0, 0), Fraction(2))]


def test_arithmetic_examples():
    assert (p + (-p)).is_zero()
    assert (1 / (1 + p)) * (1 + p) == ONE
    assert ((x + u) ** 2 - (x**2 + 2 * x * u + u**2)).is_zero()
    assert ((p + q) - (q + p)).is_zero()
    assert not (1 / (x * u**2)).is_zero()


def test_gcd_is_cancelled():
    e = parse("(q^2-p^2)/(q-p)")
    assert e == q + p
    assert e.den == Poly.constant(1)


def test_denominator_is_monic_and_content_free():
    e = parse("6/(4*x + 2*u)")
    assert e.den.leading_coefficient() == 1
    assert str(e) == "3/(u + 2*x)"  # u outranks x in the term order


def test_partial_derivative_examples():
    f = 3 * q**2 / (1 + p)
    assert f.diff(Q) == 6 * q / (1 + p)
    assert f.diff(P) == -3 * q**2 / (1 + p) ** 2
    assert x.diff(U).is_zero()


@given(points)
@settings(max_examples=20, deadline=None)
def test_partial_derivative_against_difference_oracle(point):
    # quotient rule checked against an independent formula: (N'D - ND')/D^2 by hand
    f = 3 * q**2 / (1 + p)
    xv, uv, pv, qv = point
    assume(pv != -1)
    assert f.diff(Q).evaluate(point) == 6 * qv / (1 + pv)
    assert f.diff(P).evaluate(point) == -3 * qv**2 / (1 + pv) ** 2


def test_evaluate():
    f = 3 * q**2 / (1 + p)
    assert f.evaluate((0, 0, 1, 2)) == 6
    assert (x + u).evaluate((2, 3, 0, 0)) == 5
    with pytest.raises(SingularPointError):
        (1 / (1 + p)).evaluate((0, 0, -1, 0))


def test_division_by_zero_expression():
    with pytest.raises(ZeroDivisionError):
        x / (u - u)


def test_negative_power_and_substitute():
    assert x**-2 == 1 / (x * x)
    e = (x + u) / (x - u)
    assert e.substitute({U: 2 * x}) == RationalExpr(-3)
    assert e.substitute({X: u, U: x}) == (u + x) / (u - x)


def test_coefficients_in_and_degree():
    e = (3 * q**2 + x * q + 1) / (1 + p)
    cs = e.coefficients_in(Q)
    assert cs[2] == 3 / (1 + p) and cs[1] == x / (1 + p) and cs[0] == 1 / (1 + p)
    assert e.degree(Q) == 2


# --- randomized properties -------------------------------------------------


@given(rationals(), rationals(), rationals())
@PROPS
def test_field_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    if not b.is_zero():
        assert (a / b) * b == a


@given(rationals(), rationals(), st.sampled_from(list(JetVar)))
@PROPS
def test_leibniz_rule(a, b, v):
    assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


@given(rationals(), st.sampled_from(list(JetVar)), st.sampled_from(list(JetVar)))
@PROPS
def test_mixed_partials_commute(a, v, w):
    assert a.diff(v).diff(w) == a.diff(w).diff(v)


@given(rationals(), rationals(), polys(max_terms=3, nonzero=True), st.lists(points, min_size=50, max_size=50))
@PROPS
def test_canonical_uniqueness_matches_evaluation(a, b, k, pts):
    # the same function reached by a different route has the same form ...
    rebuilt = RationalExpr(a.num * k, a.den * k)
    assert rebuilt == a and hash(rebuilt) == hash(a)
    # ... and structurally different forms differ somewhere (Schwartz-Zippel)
    vals = [(safe_eval(a, pt), safe_eval(b, pt)) for pt in pts]
    vals = [(va, vb) for va, vb in vals if va is not None and vb is not None]
    assume(len(vals) >= 10)
    if a == b:
        assert (a - b).is_zero()
        assert all(va == vb for va, vb in vals)
    else:
        assert not (a - b).is_zero()
        assert any(va != vb for va, vb in vals)


@given(rationals(), st.lists(points, min_size=5, max_size=5))
@PROPS
def test_zero_test_agrees_with_evaluation(a, pts):
    b = a * (x + 1) / (x + 1) - a
    assert b.is_zero()
    for pt in pts:
        v = safe_eval(a, pt)
        if v is not None and v != 0:
            assert not a.is_zero()


@given(rationals())
@PROPS
def test_parse_print_roundtrip(a):
    assert parse(str(a)) == a


@given(polys(max_terms=4, nonzero=True))
@PROPS
def test_poly_invariants(poly):
    assert all(c != 0 for _, c in poly.items())
    keys = [monomial_key(e) for e, _ in poly.sorted_terms()]
    assert keys == sorted(keys, reverse=True)
