"""Complexity judges: the built-in timing judge and the external-command slot."""

from __future__ import annotations

import json
import shlex
import subprocess
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from ..bundle import Problem, SourceProgram
from ..errors import ExternalJudgeProtocolError, InsufficientPoints, SpawnFailure
from ..sandbox import RunnerSpec, run_program
from .estimator import MIN_POINTS, ComplexityVerdict, EstimatorConfig, InputCache, estimate_class, measure_curve
from ..lattice import ComplexityClass


class ComplexityJudge(Protocol):
    def estimate(self, program: SourceProgram, problem: Problem) -> ComplexityVerdict: ...


@dataclass
class EmpiricalJudge:
    """Timing-based judge.

    Superpolynomial is never fitted.  It is assigned only when the candidate
    stops finishing before four points were collected while the reference
    solution still completes on the same input.
    """

    config: EstimatorConfig = field(default_factory=EstimatorConfig)
    registry: dict[str, RunnerSpec] | None = None
    cache: InputCache | None = None
    last_curve: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.cache is None:
            self.cache = InputCache(self.registry)

    def estimate(self, program: SourceProgram, problem: Problem) -> ComplexityVerdict:
        curve = measure_curve(program, problem, config=self.config, cache=self.cache, registry=self.registry)
        self.last_curve = curve
        if len(curve.points) >= MIN_POINTS:
            return estimate_class(curve)
        if curve.timed_out and self._reference_completes(problem, curve.stopped_at):
            return ComplexityVerdict(ComplexityClass.CSUPER, {}, True, source="timeout")
        raise InsufficientPoints(
            f"{problem.id}: candidate stopped at size {curve.stopped_at} "
            f"({curve.stop_status.value if curve.stop_status else 'n/a'}) with {len(curve.points)} points"
        )

    def _reference_completes(self, problem: Problem, size: int) -> bool:
        data = self.cache.get(problem, size, self.config.seed)
        res = run_program(problem.reference_solution, data, problem.limits, self.registry)
        return res.ok


@dataclass
class ExternalJudge:
    """Delegates classification to an external command.

    The command receives one JSON object on stdin (``problem_id``,
    ``statement``, ``reference_class``, ``language``, ``source``) and must
    print a single class token as the first line of its output.
    """

    command: Sequence[str] | str
    timeout: float = 60.0

    def __post_init__(self):
        if isinstance(self.command, str):
            object.__setattr__(self, "command", tuple(shlex.split(self.command)))
        if not self.command:
            raise ValueError("external judge command is empty")

    def estimate(self, program: SourceProgram, problem: Problem) -> ComplexityVerdict:
        request = {
            "problem_id": problem.id,
            "statement": problem.statement,
            "reference_class": problem.optimal_complexity.token,
            "language": program.language_tag,
            "source": program.source,
        }
        try:
            proc = subprocess.run(
                list(self.command),
                input=(json.dumps(request) + "\n").encode(),
                capture_output=True,
                timeout=self.timeout,
            )
        except FileNotFoundError as exc:
            raise SpawnFailure(f"external judge not found: {exc}") from exc
        except subprocess.TimeoutExpired:
            raise ExternalJudgeProtocolError(f"external judge exceeded {self.timeout}s") from None
        if proc.returncode != 0:
            raise ExternalJudgeProtocolError(f"external judge exited with status {proc.returncode}")
        line = proc.stdout.decode("utf-8", "replace").split("\n", 1)[0].rstrip("\r")
        try:
            cls = ComplexityClass.from_token(line)
        except ValueError:
            raise ExternalJudgeProtocolError(f"external judge returned malformed class token {line!r}") from None
        return ComplexityVerdict(cls, {}, True, source="external")


def judge_complexity(program: SourceProgram, problem: Problem, judge: ComplexityJudge | None = None) -> ComplexityVerdict:
    """Classify ``program`` and relate the result to the problem's optimal class."""
    judge = judge or EmpiricalJudge()
    return judge.estimate(program, problem).against(problem.optimal_complexity)
