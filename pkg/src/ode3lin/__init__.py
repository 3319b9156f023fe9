"""Linearization of third-order ODEs u''' = f(x, u, u', u'') by point transformations.

The package decides, with exact rational arithmetic, whether an equation is
point-equivalent to u''' = 0 (four relative invariants must vanish) and, if
so, constructs and verifies the linearizing transformation.
"""

from .auxiliary import AuxTriple, system_residuals
from .invariants import InvariantReport, Ode3, Verdict, classify, invariants, total_derivative
from .kernel import ParseError, RationalExpr, parse
from .synthesis import Outcome, SynthesisResult, SynthesisTrace, synthesize
from .transform import (
    DegenerateTransformError,
    PointTransform,
    aux_from_transform,
    prolong,
    pullback,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "AuxTriple",
    "system_residuals",
    "InvariantReport",
    "Ode3",
    "Verdict",
    "classify",
    "invariants",
    "total_derivative",
    "ParseError",
    "RationalExpr",
    "parse",
    "Outcome",
    "SynthesisResult",
    "SynthesisTrace",
    "synthesize",
    "DegenerateTransformError",
    "PointTransform",
    "aux_from_transform",
    "prolong",
    "pullback",
    "verify",
]
