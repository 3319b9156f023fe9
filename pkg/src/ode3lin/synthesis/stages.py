"""The individual stages: a3, a2, a1 from the auxiliary system, then φ and ψ.

Every stage returns a value that satisfies its own equation exactly; the
residual is recomputed before returning, so a stage never hands an
unchecked function downstream.  Integration constants are taken to be zero
and multiplicative freedom is fixed by making the leading numerator
coefficient 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from ..auxiliary import (
    a1_residual,
    a2_residual,
    a2_structure_residual,
    a3_residual,
    compatibility_residuals,
    phi_residual,
    psi_residual,
)
from ..invariants import Ode3, s_quantities, total_derivative
from ..kernel import P, Q, U, X, Poly, RationalExpr
from ..kernel.linalg import rref, scaled_numerators, solve_constants
from ..kernel.rational import ONE, ZERO
from ..transform import linear_rhs_residual
from .calculus import (
    antiderivative,
    integrate_gradient,
    log_solve,
    log_solve_gradient,
    solve_linear_first_order,
)
from .errors import (
    AnsatzExhausted,
    CompatibilityViolated,
    CompletionFailed,
    NonrationalAntiderivative,
    NotExact,
)
from .riccati import QuadraticRow, solve_rows
from .trace import SynthesisTrace

_x = RationalExpr.var(X)
_u = RationalExpr.var(U)
_p = RationalExpr.var(P)
_q = RationalExpr.var(Q)


def _split(expr: RationalExpr, var: int, what: str, stage: str) -> Tuple[RationalExpr, RationalExpr]:
    """(k0, k1) with expr == k0 + k1·var, or AnsatzExhausted."""
    if expr.den.depends_on(var) or expr.num.degree(var) > 1:
        raise AnsatzExhausted(f"{what} = {expr} is not affine in {'xupq'[var]}", stage)
    cs = expr.coefficients_in(var)
    return cs.get(0, ZERO), cs.get(1, ZERO)


def _monic(h: RationalExpr) -> RationalExpr:
    lc = h.num.leading_coefficient()
    return h if lc == 1 else h / lc


def solve_log_linear(K: RationalExpr, stage: str, name: str) -> RationalExpr:
    """Nonzero h(x, u, p) with D_x h == K·h, where K is affine in q.

    Writing K = k0 + k1·q, the q-coefficient fixes h_p/h = k1, solved as a
    product of powers of the factors of den(k1).  What is left,
    k0 - (H_x + pH_u)/H, must be r0(x,u) + p·r1(x,u) and is the log-gradient
    of the remaining factor G(x, u).
    """
    k0, k1 = _split(K, Q, f"D_x {name} / {name}", stage)
    H = log_solve(k1, P)
    rest = k0 - (H.diff(X) + _p * H.diff(U)) / H
    r0, r1 = _split(rest, P, "remaining log-derivative", stage)
    if r0.depends_on(P) or r1.depends_on(P):
        raise AnsatzExhausted(f"p-decomposition of {rest} leaves unmatched powers", stage)
    try:
        G = log_solve_gradient(r0, r1)
    except NotExact as exc:
        raise AnsatzExhausted(f"exactness check failed: {exc}", stage) from exc
    h = _monic(H * G)
    res = total_derivative(h, ZERO) - K * h
    if not res.is_zero():
        raise AnsatzExhausted(f"{name} = {h} leaves residual {res}", stage)
    return h


def solve_a3(ode: Ode3, trace: Optional[SynthesisTrace] = None) -> RationalExpr:
    """a3(x, u, p) with D_x a3 = -(1/3) f_q a3."""
    K = -ode.f.diff(Q) / 3
    a3 = solve_log_linear(K, "A3", "a3")
    assert a3_residual(ode, a3).is_zero()
    if trace is not None:
        trace.add(
            "A3",
            f"D_x a3 = ({K})*a3",
            "a3 = H(x,u,p)*G(x,u); H from the q-coefficient by partial fractions in p, G from the log-gradient",
            str(a3),
        )
    return a3


# --- a2 ---------------------------------------------------------------------

_COLUMNS = ("F1^2", "F1_x", "F1_u", "F1", "1")


@dataclass(frozen=True)
class _Reduction:
    """F1 = particular + nu·F2(s); s lives in ``red_slot`` after ``to_red``."""

    particular: RationalExpr
    nu: RationalExpr
    red_slot: int
    ratio: Fraction  # s = u - ratio·x when red_slot is U, s = x otherwise
    description: str

    @property
    def other_slot(self) -> int:
        return X if self.red_slot == U else U

    def to_red(self, e: RationalExpr) -> RationalExpr:
        if self.red_slot == X or not self.ratio:
            return e
        return e.substitute({U: _u + self.ratio * _x})

    def from_red(self, e: RationalExpr) -> RationalExpr:
        if self.red_slot == X or not self.ratio:
            return e
        return e.substitute({U: _u - self.ratio * _x})

    @property
    def variable(self) -> RationalExpr:
        return _x if self.red_slot == X else _u - self.ratio * _x

    @property
    def sx(self) -> Fraction:
        return Fraction(1) if self.red_slot == X else -self.ratio

    @property
    def su(self) -> Fraction:
        return Fraction(0) if self.red_slot == X else Fraction(1)


def _a2_split(ode: Ode3, a3: RationalExpr):
    """Substitute a2 = W q + A(x,u,p) and return (W, P0, mu, rows).

    The q¹ part fixes A = P0 + mu·F1(x,u); the q⁰ part, split by powers of p,
    gives linear-in-columns rows over ``_COLUMNS``.
    """
    f = ode.f
    fqq = f.diff(Q).diff(Q)
    _, s2, _ = s_quantities(ode)
    W = -a3 * fqq / 6
    Wq = W * _q
    base = total_derivative(Wq, f) - Wq * Wq / (2 * a3) + a3 * s2 / 18
    if base.den.depends_on(Q):
        raise AnsatzExhausted(f"a2 equation is not polynomial in q: {base}", "A2")
    cs = base.coefficients_in(Q)
    high = sorted(k for k, c in cs.items() if k >= 2 and c)
    if high:
        raise AnsatzExhausted(f"q^{high[-1]} terms of the a2 equation do not cancel", "A2")
    b0, b1 = cs.get(0, ZERO), cs.get(1, ZERO)
    P0, mu = solve_linear_first_order(fqq / 6, -b1, P)
    coeffs = [
        -(mu * mu) / (2 * a3),
        mu,
        _p * mu,
        mu.diff(X) + _p * mu.diff(U) - P0 * mu / a3,
        P0.diff(X) + _p * P0.diff(U) - P0 * P0 / (2 * a3) + b0,
    ]
    nums = scaled_numerators(coeffs)
    split = [n.coefficients_in(P) for n in nums]
    powers = sorted(set().union(*(s.keys() for s in split)))
    rows = [[RationalExpr.coerce(s.get(j, Poly())) for s in split] for j in powers]
    return W, P0, mu, rows, (b1, fqq)


def _affine_text(base: RationalExpr, coeff: RationalExpr, unknown: str) -> str:
    """'base + (coeff)*unknown' without the noise of zero or unit parts."""
    term = unknown if coeff == 1 else f"({coeff})*{unknown}"
    return term if base.is_zero() else f"{base} + {term}"


def _describe_row(row: List[RationalExpr]) -> str:
    parts = [f"({c})*{name}" if name != "1" else f"({c})" for c, name in zip(row, _COLUMNS) if c]
    return (" + ".join(parts) or "0") + " = 0"


def _reduce_f1(rows: List[List[RationalExpr]]) -> Tuple[Optional[RationalExpr], Optional[_Reduction], List[List[RationalExpr]]]:
    """Either F1 outright (algebraic case) or a reduction to one variable."""
    if not rows:
        return ZERO, None, []
    m, pivots = rref(rows, 4)
    for row in m[len(pivots):]:
        if row[4]:
            raise AnsatzExhausted(f"the p-split of the a2 equation is inconsistent: {_describe_row(row)}", "A2")
    reduced = m[: len(pivots)]
    by_pivot = dict(zip(pivots, reduced))
    if 3 in by_pivot:
        return -by_pivot[3][4], None, reduced
    if 2 in by_pivot:
        row = by_pivot[2]
        part, nu = solve_linear_first_order(row[3], -row[4], U)
        return None, _Reduction(part, nu, X, Fraction(0), _describe_row(row)), reduced
    if 1 in by_pivot:
        row = by_pivot[1]
        r = row[2]
        if not r.is_constant():
            raise AnsatzExhausted(
                f"F1 equation {_describe_row(row)} has non-constant characteristic ratio {r}", "A2"
            )
        ratio = r.constant_value()
        red = _Reduction(ZERO, ONE, U, ratio, _describe_row(row))
        cF, c1 = red.to_red(row[3]), red.to_red(row[4])
        part, nu = solve_linear_first_order(cF, -c1, X)
        red = _Reduction(red.from_red(part), red.from_red(nu), U, ratio, red.description)
        return None, red, reduced
    if 0 in by_pivot:
        raise AnsatzExhausted("F1 satisfies only quadratic relations; no linear reduction available", "A2")
    return ZERO, None, reduced


def _riccati_rows(reduced: List[List[RationalExpr]], red: _Reduction) -> List[QuadraticRow]:
    Pp, nu = red.particular, red.nu
    out: List[QuadraticRow] = []
    for cF2, cx, cu, cF, c1 in reduced:
        d = nu * (cx * red.sx + cu * red.su)
        a = cF2 * nu * nu
        b = 2 * cF2 * Pp * nu + cx * nu.diff(X) + cu * nu.diff(U) + cF * nu
        c = cF2 * Pp * Pp + cx * Pp.diff(X) + cu * Pp.diff(U) + cF * Pp + c1
        nums = scaled_numerators([red.to_red(k) for k in (d, a, b, c)])
        split = [n.coefficients_in(red.other_slot) for n in nums]
        for j in sorted(set().union(*(s.keys() for s in split))):
            coeffs = [RationalExpr.coerce(s.get(j, Poly())) for s in split]
            if any(k.depends_on(v) for k in coeffs for v in (X, U, P, Q) if v != red.red_slot):
                raise AnsatzExhausted("reduced equation still depends on a second variable", "A2")
            row = QuadraticRow(*coeffs)
            if not row.is_trivial():
                out.append(row)
    return out


def solve_a2(
    ode: Ode3,
    a3: RationalExpr,
    trace: Optional[SynthesisTrace] = None,
    riccati_degree: int = 4,
    f2: Optional[RationalExpr] = None,
) -> RationalExpr:
    """a2 = -(1/6) a3 f_qq q + A(x,u,p) solving D_x a2 = a2²/(2 a3) - a3 s2/18.

    ``f2`` replaces the Riccati search: it is the reduced unknown written as
    a function of x and u (e.g. ``x + u`` for a travelling variable).
    """
    W, P0, mu, rows, (b1, fqq) = _a2_split(ode, a3)
    if trace is not None:
        trace.add(
            "A2",
            f"A_p + ({fqq / 6})*A = {-b1}",
            f"a2 = ({W})*q + A(x,u,p)" if W else "a2 = A(x,u,p)",
            "A = " + _affine_text(P0, mu, "F1(x,u)"),
        )
    F1, red, reduced = _reduce_f1(rows)
    if red is not None:
        s = red.variable
        if trace is not None:
            trace.add(
                "A2",
                red.description,
                "compare powers of p in the q-free part",
                "F1 = " + _affine_text(red.particular, red.nu, f"F2({s})"),
            )
        if f2 is not None:
            F2 = f2
            how = "supplied"
        else:
            qrows = _riccati_rows(reduced, red)
            F2 = red.from_red(solve_rows(qrows, red.red_slot, riccati_degree))
            how = "; ".join(r.describe("F2", "xupq"[red.red_slot] if red.red_slot == X else "s") for r in qrows) or "0 = 0"
            if trace is not None:
                trace.add(
                    "A2",
                    how if red.red_slot == X else f"{how}  (s = {s})",
                    f"F2 = N/M rational in {s}, deg N, deg M <= {riccati_degree}",
                    str(F2),
                )
        F1 = red.particular + red.nu * F2
    elif f2 is not None:
        F1 = f2
    a2 = W * _q + P0 + mu * F1
    res = a2_residual(ode, a2, a3)
    if not res.is_zero():
        raise AnsatzExhausted(f"a2 = {a2} leaves residual {res}", "A2")
    assert a2_structure_residual(ode, a2, a3).is_zero()
    if trace is not None:
        trace.add(
            "A2",
            f"D_x a2 = a2^2/(2*a3) - ({a3})*s2/18",
            "a2 = W*q + P0 + mu*F1",
            str(a2),
        )
    return a2


def solve_a1(ode: Ode3, a2: RationalExpr, a3: RationalExpr, trace: Optional[SynthesisTrace] = None) -> RationalExpr:
    """a1(x, u, p) with D_x a1 = (a2/a3) a1, checked against both compatibility identities."""
    K = a2 / a3
    a1 = solve_log_linear(K, "A1", "a1")
    assert a1_residual(ode, a1, a2, a3).is_zero()
    bad = {k: v for k, v in compatibility_residuals(a1, a3).items() if v}
    if bad:
        name, val = next(iter(bad.items()))
        if trace is not None:
            trace.add("A1", f"D_x a1 = ({K})*a1", "log-derivative decomposition", str(a1), f"{name} = {val}")
        raise CompatibilityViolated(f"a1 = {a1} violates {name} = 0 (got {val})", "A1")
    if trace is not None:
        trace.add("A1", f"D_x a1 = ({K})*a1", "log-derivative decomposition; compatibility identities checked", str(a1))
    return a1


def solve_phi(a1: RationalExpr, a3: RationalExpr, trace: Optional[SynthesisTrace] = None) -> RationalExpr:
    """φ(x, u) with φ_x + p φ_u = a1/a3."""
    ratio = a1 / a3
    if ratio.depends_on(Q) or ratio.den.depends_on(P) or ratio.num.degree(P) > 1:
        raise NotExact(f"a1/a3 = {ratio} is not of the form r0(x,u) + p*r1(x,u)", "PHI")
    r0, r1 = _split(ratio, P, "a1/a3", "PHI")
    phi = integrate_gradient(r0, r1)
    assert phi_residual(phi, a1, a3).is_zero()
    if trace is not None:
        trace.add("PHI", f"phi_x + p*phi_u = {ratio}", "term-by-term antiderivative with cross-derivative check", str(phi))
    return phi


def _monomial_basis(max_degree: int) -> List[RationalExpr]:
    out = []
    for d in range(1, max_degree + 1):
        for i in range(d, -1, -1):
            out.append(_x**i * _u ** (d - i))
    return out


def _solve_u_from_phi(phi: RationalExpr) -> Optional[RationalExpr]:
    """u as a function of (x, v) from v = φ(x, u), v stored in the u slot.

    Only linear-fractional dependence on u is inverted; None otherwise.
    """
    if phi.num.degree(U) > 1 or phi.den.degree(U) > 1:
        return None
    n = phi.num.coefficients_in(U)
    d = phi.den.coefficients_in(U)
    n0, n1 = (RationalExpr.coerce(n.get(k, Poly())) for k in (0, 1))
    d0, d1 = (RationalExpr.coerce(d.get(k, Poly())) for k in (0, 1))
    v = _u
    return (n0 - v * d0) / (v * d1 - n1)


def _psi_along_phi(phi: RationalExpr, rho: RationalExpr) -> Optional[RationalExpr]:
    """Solve the Jacobian equation in the coordinates (x, φ).

    With ψ(x, u) = Ψ(x, φ(x, u)) the equation becomes -φ_u Ψ_x = ρ, a single
    integration in x once u is expressed through φ.
    """
    u_of = _solve_u_from_phi(phi)
    if u_of is None:
        return None
    integrand = (-rho / phi.diff(U)).substitute({U: u_of})
    try:
        Psi = antiderivative(integrand, X)
    except NonrationalAntiderivative:
        return None
    return Psi.substitute({U: phi})


def solve_psi_particular(
    phi: RationalExpr, a1: RationalExpr, a3: RationalExpr, max_degree: int = 6
) -> RationalExpr:
    """A particular ψ with φ_x ψ_u - φ_u ψ_x = a1²/a3 (before completion)."""
    rho = a1 * a1 / a3
    if rho.depends_on(P) or rho.depends_on(Q):
        raise CompatibilityViolated(f"a1^2/a3 = {rho} depends on p", "PSI")
    if not phi.depends_on(U):
        return antiderivative(rho / phi.diff(X), U)
    psi = _psi_along_phi(phi, rho)
    if psi is not None:
        return psi
    basis = _monomial_basis(max_degree)
    images = [phi.diff(X) * m.diff(U) - phi.diff(U) * m.diff(X) for m in basis]
    sol = solve_constants(-rho, images)
    if sol is None:
        raise AnsatzExhausted(
            f"no polynomial psi of total degree <= {max_degree} solves the Jacobian equation", "PSI"
        )
    psi = ZERO
    for c, m in zip(sol, basis):
        if c:
            psi = psi + c * m
    return psi


def complete_psi(ode: Ode3, phi: RationalExpr, psi: RationalExpr, max_degree: int = 6) -> Tuple[RationalExpr, RationalExpr]:
    """Correct ψ by g so that (φ, ψ + g) maps u''' = f to ū''' = 0.

    g ranges over polynomials in x (fibre-preserving φ) or in φ otherwise;
    both leave the Jacobian unchanged.  The residual is linear in ψ, so the
    coefficients come from one linear solve.  Returns (ψ + g, g).
    """
    r0 = linear_rhs_residual(ode, phi, psi)
    if r0.is_zero():
        return psi, ZERO
    gen = _x if not phi.depends_on(U) else phi
    basis = [gen**k for k in range(max_degree + 1)]
    images = [linear_rhs_residual(ode, phi, g) for g in basis]
    sol = solve_constants(r0, images)
    if sol is None:
        raise CompletionFailed(
            f"no correction g({gen}) of degree <= {max_degree} removes residual {r0}", "COMPLETION"
        )
    g = ZERO
    for c, b in zip(sol, basis):
        if c:
            g = g + c * b
    return psi + g, g


def solve_psi(
    ode: Ode3,
    phi: RationalExpr,
    a1: RationalExpr,
    a3: RationalExpr,
    trace: Optional[SynthesisTrace] = None,
    max_degree: int = 6,
    psi: Optional[RationalExpr] = None,
) -> RationalExpr:
    """ψ solving the Jacobian equation, then completed until the map verifies.

    A supplied ``psi`` skips the particular solution but is still completed.
    """
    rho = a1 * a1 / a3
    if psi is None:
        psi = solve_psi_particular(phi, a1, a3, max_degree)
        if trace is not None:
            if not phi.depends_on(U):
                ansatz = "psi_u = (a1^2/a3)/phi_x integrated in u"
            elif _solve_u_from_phi(phi) is not None:
                ansatz = "psi = Psi(x, phi); -phi_u*Psi_x = a1^2/a3 integrated in x"
            else:
                ansatz = f"psi = sum c_ij x^i u^j, i + j <= {max_degree}"
            trace.add("PSI", f"phi_x*psi_u - phi_u*psi_x = {rho}", ansatz, str(psi))
    before = psi
    psi, g = complete_psi(ode, phi, psi, max_degree)
    if g and trace is not None:
        gen = "x" if not phi.depends_on(U) else f"phi = {phi}"
        trace.add(
            "COMPLETION",
            f"A + B*f = 0 for (phi, {before} + g)",
            f"g polynomial in {gen}, degree <= {max_degree}",
            str(psi),
        )
    assert psi_residual(phi, psi, a1, a3).is_zero()
    return psi
