"""Hypothesis strategies and fixture expressions shared by the tests."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from ode3lin.invariants import Ode3, s_quantities, total_derivative
from ode3lin.kernel import P, Q, U, X, Poly, RationalExpr, parse

x, u, p, q = (RationalExpr.var(v) for v in (X, U, P, Q))
ZERO = RationalExpr(0)

EX31 = "(6/u*u' + 3/x)*u'' - 6/u^2*u'^3 - 6/(x*u)*u'^2 - 6/x^2*u' - 6*u/x^3"
EX32 = "3*u''^2/(1+u')"
EX33 = "3/2*u''^2/u'"

small_fraction = st.builds(
    Fraction,
    st.integers(min_value=-5, max_value=5),
    st.integers(min_value=1, max_value=3),
)
exponent = st.tuples(*[st.integers(min_value=0, max_value=2)] * 4)


@st.composite
def polys(draw, max_terms=4, nonzero=False):
    terms = draw(st.dictionaries(exponent, small_fraction, max_size=max_terms))
    p = Poly({e: c for e, c in terms.items() if c})
    if nonzero and p.is_zero():
        p = Poly.constant(draw(st.integers(min_value=1, max_value=4)))
    return p


@st.composite
def rationals(draw, max_terms=3):
    num = draw(polys(max_terms))
    den = draw(polys(max_terms, nonzero=True))
    return RationalExpr(num, den)


points = st.tuples(*[small_fraction] * 4)


def safe_eval(expr, point):
    """Evaluate, or None at a pole."""
    try:
        return expr.evaluate(point)
    except ZeroDivisionError:
        return None


def random_rational(rng, max_terms: int = 3, max_exp: int = 2) -> RationalExpr:
    """Seeded plain-``random`` counterpart of :func:`rationals`."""

    def poly(nonzero: bool) -> Poly:
        terms = {}
        for _ in range(rng.randint(0 if not nonzero else 1, max_terms)):
            e = tuple(rng.randint(0, max_exp) for _ in range(4))
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            if c:
                terms[e] = c
        if nonzero and not terms:
            terms[(0, 0, 0, 0)] = Fraction(1)
        return Poly(terms)

    return RationalExpr(poly(False), poly(True))


def random_point(rng):
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4))


def i3_s_form(f):
    s1, s2, _ = s_quantities(Ode3(f))
    return 2 * s1 * s2 - 3 * total_derivative(s2, f) + 54 * f.diff(U)


def random_rhs(rng: random.Random) -> RationalExpr:
    """Small random rational right-hand side, at most quadratic in q."""

    def small_poly(vars_):
        out = ZERO
        for _ in range(rng.randint(1, 3)):
            term = RationalExpr(rng.choice([-3, -2, -1, 1, 2, 3]))
            for v in vars_:
                term = term * v ** rng.randint(0, 2)
            out = out + term
        return out

    num = small_poly([x, u, p]) * q**2 + small_poly([x, u, p]) * q + small_poly([x, u, p])
    den = small_poly([x, u, p])
    if den.is_zero():
        den = 1 + p
    return num / den
