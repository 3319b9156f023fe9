"""Failure modes of the synthesis stages."""

from __future__ import annotations

from typing import Optional


class SynthesisError(Exception):
    """A stage could not produce its function within the supported ansatz."""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage


class AnsatzExhausted(SynthesisError):
    pass


class RiccatiUnsolved(SynthesisError):
    pass


class CompatibilityViolated(SynthesisError):
    pass


class NotExact(SynthesisError):
    pass


class NonrationalAntiderivative(SynthesisError):
    pass


class CompletionFailed(SynthesisError):
    pass


class HintRejected(ValueError):
    """A user-supplied stage value does not satisfy that stage's equation."""

    def __init__(self, stage: str, residual):
        super().__init__(f"hint for {stage} rejected: residual {residual} is not identically zero")
        self.stage = stage
        self.residual = residual
