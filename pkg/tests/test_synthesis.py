import json

import pytest

from ode3lin.auxiliary import system_residuals
from ode3lin.generators import transforms
from ode3lin.invariants import Ode3
from ode3lin.kernel import P, Q, U, X, RationalExpr, parse
from ode3lin.synthesis import (
    STAGES,
    AnsatzExhausted,
    CompatibilityViolated,
    CompletionFailed,
    HintRejected,
    NonrationalAntiderivative,
    NotExact,
    Outcome,
    complete_psi,
    solve_a1,
    solve_a2,
    solve_a3,
    solve_phi,
    solve_psi,
    synthesize,
)
from ode3lin.transform import PointTransform, pullback, verify

from .strategies import EX31, EX32, EX33

x, u, p, q = (RationalExpr.var(v) for v in (X, U, P, Q))
ZERO, ONE = RationalExpr(0), RationalExpr(1)

ODE31, ODE32, ODE33, ODEX = (Ode3.parse(t) for t in (EX31, EX32, EX33, "x"))
A3_31 = 1 / (x * u**2)
A2_31 = -2 * p / (x * u**3) - 1 / (x**2 * u**2)
A3_32 = 1 / (1 + p) ** 2
A2_32 = -q / (1 + p) ** 3


# --- individual stages ------------------------------------------------------


def test_solve_a3_examples():
    assert solve_a3(ODE31) == A3_31
    assert solve_a3(ODE32) == A3_32
    assert solve_a3(ODEX) == ONE


def test_solve_a3_refuses_half_integer_powers():
    # the q-coefficient asks for (1+p)^(-1/2)
    with pytest.raises(AnsatzExhausted):
        solve_a3(Ode3(3 * q**2 / (4 * (1 + p))))


def test_solve_a2_examples():
    assert solve_a2(ODE31, A3_31) == A2_31
    assert solve_a2(ODE32, A3_32) == A2_32
    assert solve_a2(ODEX, ONE) == ZERO


def test_solve_a1_examples():
    assert solve_a1(ODE31, A2_31, A3_31) == 1 / (x * u**2)
    assert solve_a1(ODE32, A2_32, A3_32) == 1 / (1 + p)
    assert solve_a1(ODEX, ZERO, ONE) == ONE


def test_solve_a1_compatibility_violation():
    # a1 = 1 solves D_x a1 = 0, but then a1/a3 = (1+p)^2 is not affine in p
    with pytest.raises(CompatibilityViolated):
        solve_a1(Ode3(ZERO), ZERO, A3_32)


def test_solve_phi_examples():
    assert solve_phi(ONE, ONE) == x
    assert solve_phi(1 / (1 + p), A3_32) == x + u
    assert solve_phi(p, ONE) == u


def test_solve_phi_errors():
    with pytest.raises(NotExact):
        solve_phi(u + 2 * x * p, ONE)
    with pytest.raises(NonrationalAntiderivative):
        solve_phi(1 / x, ONE)


def test_solve_psi_examples():
    assert solve_psi(ODE31, x, 1 / (x * u**2), A3_31) == -1 / (x * u)
    assert solve_psi(ODE32, x + u, 1 / (1 + p), A3_32) == -x


def test_completion_adds_quartic_term():
    psi = solve_psi(ODEX, x, ONE, ONE)
    assert psi == u - x**4 / 24
    assert complete_psi(ODEX, x, u) == (u - x**4 / 24, -(x**4) / 24)


def test_completion_degree_bound():
    with pytest.raises(CompletionFailed):
        complete_psi(ODEX, x, u, max_degree=3)


# --- the pipeline -----------------------------------------------------------


def test_first_example_stage_by_stage():
    res = synthesize(ODE31)
    assert res.outcome is Outcome.SUCCESS
    assert (res.a3, res.a2, res.a1) == (A3_31, A2_31, 1 / (x * u**2))
    assert res.transform.phi == x
    assert verify(ODE31, res.transform)
    steps = [s for s in res.trace if s.stage == "A2"]
    assert any(s.result == "-1/(x^2)" for s in steps)  # the Riccati particular solution


def test_second_example_stage_by_stage():
    res = synthesize(ODE32)
    assert res.ok
    assert (res.a3, res.a2, res.a1) == (A3_32, A2_32, 1 / (1 + p))
    assert res.transform.phi == x + u
    assert verify(ODE32, res.transform)
    assert any("F2(u + x)" in s.result for s in res.trace)


def test_not_applicable():
    res = synthesize(ODE33)
    assert res.outcome is Outcome.NOT_APPLICABLE
    assert res.witness == 2
    assert res.transform is None and len(res.trace) == 0


def test_completion_path():
    res = synthesize(ODEX)
    assert res.ok
    assert res.transform == PointTransform(x, u - x**4 / 24)
    assert res.trace.stages()[-2:] == ["COMPLETION", "VERIFIED"]


def test_trace_serialisation():
    res = synthesize(ODE32)
    records = json.loads(res.trace.to_json())
    assert [r["stage"] for r in records] == res.trace.stages()
    assert records[-1]["stage"] == "VERIFIED"
    for r in records:
        assert set(r) == {"stage", "equation", "ansatz", "result", "residual-check"}
        assert r["stage"] in STAGES
        assert r["residual-check"] == "zero"


@pytest.mark.parametrize(
    "ode, kwargs, stage",
    [
        (ODE31, {"riccati_degree": 1}, "A2"),  # -1/x^2 needs a degree-2 denominator
        (ODEX, {"max_degree": 3}, "COMPLETION"),  # the correction is quartic
        (pullback(ZERO, PointTransform(-1 / (2 * x * u), x)).f, {}, "A2"),  # non-constant characteristic
    ],
)
def test_partial_results_name_the_blocking_stage(ode, kwargs, stage):
    ode = ode if isinstance(ode, Ode3) else Ode3(ode)
    res = synthesize(ode, **kwargs)
    assert res.outcome is Outcome.PARTIAL
    assert res.blocking_stage == stage
    assert res.transform is None
    assert res.message
    assert res.a3 is not None  # the stages that did finish are kept


# --- hints ------------------------------------------------------------------


@pytest.mark.parametrize(
    "ode, hints, check",
    [
        (ODE31, {"a3": "2/(x*u^2)"}, lambda r: r.a3 == 2 / (x * u**2)),
        (ODE31, {"F2": "-1/x^2"}, lambda r: r.a2 == A2_31),
        (ODE31, {"psi": "-1/(x*u)"}, lambda r: r.transform.psi == -1 / (x * u)),
        (ODE32, {"a2": "-q/(1+p)^3", "a1": "2/(1+p)"}, lambda r: r.a1 == 2 / (1 + p)),
        (ODE32, {"phi": "x+u+5"}, lambda r: r.transform.phi == x + u + 5),
    ],
)
def test_valid_hints_replace_stages(ode, hints, check):
    res = synthesize(ode, hints=hints)
    assert res.ok
    assert check(res)
    assert verify(ode, res.transform)
    assert any(s.ansatz == "supplied" for s in res.trace) or "F2" in hints


@pytest.mark.parametrize(
    "ode, hints",
    [
        (ODE31, {"a3": "x"}),
        (ODE31, {"a3": "0"}),
        (ODE31, {"F2": "0"}),
        (ODE32, {"a2": "0"}),
        (ODE32, {"a1": "1"}),
        (ODE32, {"phi": "x"}),
        (ODE31, {"psi": "x"}),
        (ODE31, {"phi": "x*p"}),
    ],
)
def test_invalid_hints_are_rejected_with_residual(ode, hints):
    with pytest.raises(HintRejected) as info:
        synthesize(ode, hints=hints)
    assert info.value.stage in hints
    assert "rejected" in str(info.value)


def test_unknown_hint_stage():
    with pytest.raises(ValueError):
        synthesize(ODE31, hints={"a4": "1"})


# --- soundness over generated equations --------------------------------------


@pytest.mark.parametrize("t", list(transforms(20, seed=23)), ids=str)
def test_synthesis_is_sound_on_generated_equations(t):
    ode = pullback(ZERO, t)
    res = synthesize(ode)
    if res.ok:
        assert verify(ode, res.transform)
        assert res.trace.stages()[-1] == "VERIFIED"
        assert all(r.is_zero() for r in system_residuals(ode, res.aux).values())
    else:
        assert res.outcome is Outcome.PARTIAL and res.blocking_stage in STAGES
