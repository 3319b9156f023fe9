import time

import pytest

from ode3lin.kernel import U, X, RationalExpr
from ode3lin.synthesis.errors import RiccatiUnsolved
from ode3lin.synthesis.riccati import QuadraticRow, shapes, solve_rows

x = RationalExpr.var(X)
ONE, ZERO = RationalExpr(1), RationalExpr(0)


def riccati(a, b, c):
    """Row for F' = a F^2 + b F + c."""
    return QuadraticRow(ONE, -a, -b, -c)


def test_search_order():
    assert list(shapes(1)) == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_first_example_riccati_picks_minimal_height_solution():
    # F' = (x/2) F^2 + 3/(2 x^3) has -1/x^2 and -3/x^2 in the same shape
    row = riccati(x / 2, ZERO, 3 / (2 * x**3))
    for F in (-1 / x**2, -3 / x**2):
        assert row.residual(F, X).is_zero()
    assert solve_rows([row], X) == -1 / x**2


def test_constant_solution_comes_first():
    assert solve_rows([riccati(RationalExpr(1) / 2, ZERO, ZERO)], X) == ZERO


def test_nonconstant_solution():
    assert solve_rows([riccati(ONE, ZERO, -2 / x**2)], X) == 1 / x


def test_recovers_constructed_solution():
    F = (x**2 + 1) / (x - 1)
    c = F.diff(X) - F * F
    assert solve_rows([riccati(ONE, ZERO, c)], X) == F


def test_solution_in_the_u_slot():
    u = RationalExpr.var(U)
    assert solve_rows([QuadraticRow(ONE, -ONE, ZERO, 2 / u**2)], U) == 1 / u


def test_no_rational_solution_fails_fast():
    t = time.perf_counter()
    with pytest.raises(RiccatiUnsolved):
        solve_rows([riccati(ONE, ZERO, ONE)], X)  # tan(x)
    assert time.perf_counter() - t < 5


def test_degree_bound_is_respected():
    with pytest.raises(RiccatiUnsolved):
        solve_rows([riccati(x / 2, ZERO, 3 / (2 * x**3))], X, max_degree=1)


def test_algebraic_rows_and_trivial_rows():
    assert solve_rows([QuadraticRow(ZERO, ZERO, ONE, -x)], X) == x
    assert solve_rows([QuadraticRow(ZERO, ZERO, ZERO, ZERO)], X) == ZERO


def test_describe():
    text = riccati(x / 2, ZERO, 3 / (2 * x**3)).describe("F2", "x")
    assert text.startswith("dF2/dx = ")
    assert "F2^2" in text
