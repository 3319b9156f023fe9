"""End-to-end construction of a linearizing point transformation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional, Union

from ..auxiliary import (
    AuxTriple,
    a1_residual,
    a2_residual,
    a2_structure_residual,
    a3_residual,
    compatibility_residuals,
    phi_residual,
    psi_residual,
)
from ..invariants import InvariantReport, Ode3, Verdict, invariants
from ..kernel import P, Q, RationalExpr, parse
from ..transform import DegenerateTransformError, PointTransform, verify
from . import stages
from .errors import CompletionFailed, HintRejected, SynthesisError
from .trace import SynthesisTrace

HINT_STAGES = ("a3", "a2", "F2", "a1", "phi", "psi")


class Outcome(str, Enum):
    SUCCESS = "success"
    PARTIAL = "partial"
    NOT_APPLICABLE = "not-applicable"


@dataclass
class SynthesisResult:
    """Outcome of :func:`synthesize`.

    On success ``transform`` is set and verified; on a partial result the
    functions found so far are kept and ``blocking_stage`` names the stage
    that gave up.
    """

    outcome: Outcome
    report: InvariantReport
    trace: SynthesisTrace = field(default_factory=SynthesisTrace)
    transform: Optional[PointTransform] = None
    a1: Optional[RationalExpr] = None
    a2: Optional[RationalExpr] = None
    a3: Optional[RationalExpr] = None
    phi: Optional[RationalExpr] = None
    psi: Optional[RationalExpr] = None
    blocking_stage: Optional[str] = None
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.outcome is Outcome.SUCCESS

    @property
    def witness(self) -> Optional[int]:
        return self.report.witness if self.outcome is Outcome.NOT_APPLICABLE else None

    @property
    def aux(self) -> Optional[AuxTriple]:
        if None in (self.a1, self.a2, self.a3):
            return None
        return AuxTriple(self.a1, self.a2, self.a3)

    def aux_partial(self) -> Dict[str, Optional[str]]:
        """a1, a2, a3 as text, with None marking the holes."""
        return {k: (None if v is None else str(v)) for k, v in (("a1", self.a1), ("a2", self.a2), ("a3", self.a3))}


def _coerce_hints(hints: Optional[Mapping[str, Union[str, RationalExpr]]]) -> Dict[str, RationalExpr]:
    out: Dict[str, RationalExpr] = {}
    for key, value in (hints or {}).items():
        if key not in HINT_STAGES:
            raise ValueError(f"unknown hint stage {key!r}; expected one of {', '.join(HINT_STAGES)}")
        out[key] = parse(value) if isinstance(value, str) else RationalExpr.coerce(value)
    return out


def _check_hint(stage: str, residual: RationalExpr) -> None:
    if not residual.is_zero():
        raise HintRejected(stage, residual)


def _nonzero(stage: str, value: RationalExpr) -> None:
    if value.is_zero():
        raise HintRejected(stage, f"{stage} must be nonzero")


def _no_jet(stage: str, value: RationalExpr, *banned: int) -> None:
    for v in banned:
        if value.depends_on(v):
            raise HintRejected(stage, f"{value} depends on {'xupq'[v]}")


def synthesize(
    ode: Ode3,
    max_degree: int = 6,
    riccati_degree: int = 4,
    hints: Optional[Mapping[str, Union[str, RationalExpr]]] = None,
) -> SynthesisResult:
    """Solve for a3, a2, a1, φ, ψ in turn and verify the resulting map.

    ``hints`` maps stage names (a3, a2, F2, a1, phi, psi) to values used in
    place of that stage's solver.  Each hint is checked against its stage
    equation first; a failing hint raises :class:`HintRejected` rather than
    being used.  Stage failures are returned as a partial result.
    """
    hint = _coerce_hints(hints)
    report = invariants(ode)
    trace = SynthesisTrace()
    if report.verdict is not Verdict.MAXIMALLY_SYMMETRIC:
        return SynthesisResult(
            Outcome.NOT_APPLICABLE,
            report,
            trace,
            message=f"I{report.witness} does not vanish: {report.values[report.witness - 1]}",
        )
    res = SynthesisResult(Outcome.PARTIAL, report, trace)
    stage = "A3"
    try:
        if "a3" in hint:
            a3 = hint["a3"]
            _no_jet("a3", a3, Q)
            _nonzero("a3", a3)
            _check_hint("a3", a3_residual(ode, a3))
            trace.add("A3", "D_x a3 = -(1/3)*f_q*a3", "supplied", str(a3))
        else:
            a3 = stages.solve_a3(ode, trace)
        res.a3 = a3

        stage = "A2"
        if "a2" in hint:
            a2 = hint["a2"]
            _check_hint("a2", a2_structure_residual(ode, a2, a3))
            _check_hint("a2", a2_residual(ode, a2, a3))
            trace.add("A2", "D_x a2 = a2^2/(2*a3) - a3*s2/18", "supplied", str(a2))
        else:
            try:
                a2 = stages.solve_a2(ode, a3, trace, riccati_degree, f2=hint.get("F2"))
            except SynthesisError as exc:
                if "F2" in hint:
                    raise HintRejected("F2", str(exc)) from exc
                raise
        res.a2 = a2

        stage = "A1"
        if "a1" in hint:
            a1 = hint["a1"]
            _no_jet("a1", a1, Q)
            _nonzero("a1", a1)
            _check_hint("a1", a1_residual(ode, a1, a2, a3))
            for val in compatibility_residuals(a1, a3).values():
                _check_hint("a1", val)
            trace.add("A1", "D_x a1 = (a2/a3)*a1", "supplied", str(a1))
        else:
            a1 = stages.solve_a1(ode, a2, a3, trace)
        res.a1 = a1

        stage = "PHI"
        if "phi" in hint:
            phi = hint["phi"]
            _no_jet("phi", phi, P, Q)
            _check_hint("phi", phi_residual(phi, a1, a3))
            trace.add("PHI", "phi_x + p*phi_u = a1/a3", "supplied", str(phi))
        else:
            phi = stages.solve_phi(a1, a3, trace)
        res.phi = phi

        stage = "PSI"
        psi = hint.get("psi")
        if psi is not None:
            _no_jet("psi", psi, P, Q)
            _check_hint("psi", psi_residual(phi, psi, a1, a3))
            trace.add("PSI", "phi_x*psi_u - phi_u*psi_x = a1^2/a3", "supplied", str(psi))
        psi = stages.solve_psi(ode, phi, a1, a3, trace, max_degree, psi=psi)
        res.psi = psi

        stage = "VERIFIED"
        try:
            t = PointTransform(phi, psi)
        except DegenerateTransformError as exc:
            raise CompletionFailed(str(exc), "PSI") from exc
        if not verify(ode, t):
            raise CompletionFailed(f"({phi}, {psi}) does not verify", "COMPLETION")
    except SynthesisError as exc:
        res.blocking_stage = exc.stage or stage
        res.message = f"{type(exc).__name__}: {exc}"
        return res
    trace.add("VERIFIED", "A + B*f = 0", "exact residual of the transformed equation", str(t))
    res.transform = t
    res.outcome = Outcome.SUCCESS
    assert verify(ode, t)
    return res
