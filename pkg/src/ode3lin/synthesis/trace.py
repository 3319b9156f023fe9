"""Step-by-step record of a synthesis run."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import List

STAGES = ("A3", "A2", "A1", "PHI", "PSI", "COMPLETION", "VERIFIED")


@dataclass(frozen=True)
class TraceStep:
    stage: str
    equation: str
    ansatz: str
    result: str
    residual_check: str = "zero"

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage tag {self.stage!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["residual-check"] = d.pop("residual_check")
        return d


@dataclass
class SynthesisTrace:
    """Ordered stage records; owned by a single synthesis run."""

    steps: List[TraceStep] = field(default_factory=list)

    def add(self, stage: str, equation: str, ansatz: str, result: str, residual_check: str = "zero") -> TraceStep:
        step = TraceStep(stage, equation, ansatz, result, residual_check)
        self.steps.append(step)
        return step

    def stages(self) -> List[str]:
        return [s.stage for s in self.steps]

    def to_list(self) -> List[dict]:
        return [s.to_dict() for s in self.steps]

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_list(), ensure_ascii=False, **kwargs)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)
