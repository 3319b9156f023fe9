"""Construction of the linearizing transformation from the auxiliary system."""

from .errors import (
    AnsatzExhausted,
    CompatibilityViolated,
    CompletionFailed,
    HintRejected,
    NonrationalAntiderivative,
    NotExact,
    RiccatiUnsolved,
    SynthesisError,
)
from .pipeline import HINT_STAGES, Outcome, SynthesisResult, synthesize
from .stages import complete_psi, solve_a1, solve_a2, solve_a3, solve_phi, solve_psi
from .trace import STAGES, SynthesisTrace, TraceStep

__all__ = [
    "AnsatzExhausted",
    "CompatibilityViolated",
    "CompletionFailed",
    "HintRejected",
    "NonrationalAntiderivative",
    "NotExact",
    "RiccatiUnsolved",
    "SynthesisError",
    "HINT_STAGES",
    "Outcome",
    "SynthesisResult",
    "synthesize",
    "complete_psi",
    "solve_a1",
    "solve_a2",
    "solve_a3",
    "solve_phi",
    "solve_psi",
    "STAGES",
    "SynthesisTrace",
    "TraceStep",
]
