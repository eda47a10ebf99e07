"""Gated reward composition and time-optimal candidate selection.

    R = R_format + R_correctness              if PassRate < 1
    R = R_format + R_correctness + R_time     if PassRate = 1 (stage 2 only)

The gate compares the pass rate with 1 as an exact rational.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .bundle import Rollout, SourceProgram
from .complexity import ComplexityVerdict, Relation
from .correctness import PassRate
from .errors import MissingVerdict
from .sandbox import CompileError


class Stage(str, enum.Enum):
    STAGE1 = "stage1"
    STAGE2 = "stage2"


@dataclass(frozen=True)
class RewardConfig:
    w_f: float = 0.1
    w_t: float = 0.5
    per_step_decay: float = 0.5

    def __post_init__(self):
        if self.w_f <= 0 or self.w_t <= 0 or self.w_t > 1:
            raise ValueError("weights must be positive with w_t <= 1")
        if not 0 < self.per_step_decay <= 1:
            raise ValueError("per_step_decay must lie in (0, 1]")

    @classmethod
    def from_mapping(cls, data: dict[str, Any] | None) -> "RewardConfig":
        data = data or {}
        base = cls()
        return cls(
            w_f=float(data.get("w_f", base.w_f)),
            w_t=float(data.get("w_t", base.w_t)),
            per_step_decay=float(data.get("per_step_decay", base.per_step_decay)),
        )

    def to_dict(self) -> dict[str, float]:
        return {"w_f": self.w_f, "w_t": self.w_t, "per_step_decay": self.per_step_decay}


@dataclass(frozen=True)
class RewardBreakdown:
    r_format: float
    r_correctness: float
    r_time: float | None
    gate_open: bool
    total: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "r_format": self.r_format,
            "r_correctness": self.r_correctness,
            "r_time": self.r_time,
            "gate_open": self.gate_open,
            "total": self.total,
        }


def format_reward(rollout: Rollout, compile_outcome: object = None, config: RewardConfig | None = None) -> float:
    """``w_f`` when a program was extracted and (if compiled) compiled cleanly.

    ``compile_outcome`` is ``None`` when no compile step applies, a
    :class:`~gatejudge.sandbox.CompileError` on failure, or a bool.
    """
    config = config or RewardConfig()
    if rollout.extracted_program is None:
        return 0.0
    if isinstance(compile_outcome, CompileError) or compile_outcome is False:
        return 0.0
    return config.w_f


def time_reward(verdict: ComplexityVerdict, config: RewardConfig | None = None) -> float:
    config = config or RewardConfig()
    if verdict.relation is None:
        raise ValueError("verdict has no relation to the reference class")
    if verdict.relation is not Relation.WORSE:
        return config.w_t
    return config.w_t * max(0.0, 1.0 - config.per_step_decay * verdict.steps)


def compose_reward(
    rollout: Rollout,
    pass_rate: PassRate | Fraction,
    verdict: ComplexityVerdict | None,
    config: RewardConfig | None = None,
    stage: Stage | str = Stage.STAGE2,
    *,
    compile_outcome: object = None,
) -> RewardBreakdown:
    config = config or RewardConfig()
    stage = Stage(stage)
    value = pass_rate.value if isinstance(pass_rate, PassRate) else Fraction(pass_rate)
    r_format = format_reward(rollout, compile_outcome, config)
    r_correct = float(value)
    gate_open = stage is Stage.STAGE2 and value == 1
    if not gate_open:
        return RewardBreakdown(r_format, r_correct, None, False, r_format + r_correct)
    if verdict is None:
        raise MissingVerdict(f"rollout {rollout.problem_id}#{rollout.rollout_index} passed every test but has no verdict")
    r_time = time_reward(verdict, config)
    return RewardBreakdown(r_format, r_correct, r_time, True, r_format + r_correct + r_time)


def select_time_optimal(
    candidates: Sequence[tuple[SourceProgram, PassRate, ComplexityVerdict]],
) -> list[SourceProgram]:
    """Fully correct candidates whose estimated class is the best among them.

    Output keeps the input order of the survivors.
    """
    correct = [(prog, v) for prog, rate, v in candidates if rate.full]
    if not correct:
        return []
    best = min(v.estimated for _, v in correct)
    return [prog for prog, v in correct if v.estimated == best]
