"""Output comparison and pass-rate judging."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .bundle import CompareMode, Problem, SourceProgram
from .sandbox import CompileError, ExecutionResult, RunnerSpec, Status, compile, default_workers, run


class FailureKind(str, enum.Enum):
    WRONG_ANSWER = "wrong_answer"
    TIMEOUT = "timeout"
    RUNTIME_ERROR = "runtime_error"
    COMPILE_ERROR = "compile_error"
    MEMORY_EXCEEDED = "memory_exceeded"


_STATUS_FAILURE = {
    Status.TIMEOUT: FailureKind.TIMEOUT,
    Status.RUNTIME_ERROR: FailureKind.RUNTIME_ERROR,
    Status.COMPILE_ERROR: FailureKind.COMPILE_ERROR,
    Status.MEMORY_EXCEEDED: FailureKind.MEMORY_EXCEEDED,
    # Truncated output cannot match; report it as a wrong answer.
    Status.OUTPUT_TRUNCATED: FailureKind.WRONG_ANSWER,
}


@dataclass(frozen=True)
class TestVerdict:
    test_index: int
    passed: bool
    failure_kind: FailureKind | None = None

    __test__ = False

    def __post_init__(self):
        if self.passed != (self.failure_kind is None):
            raise ValueError("failure_kind must be set exactly when the test failed")


@dataclass(frozen=True)
class PassRate:
    passed_count: int
    total_count: int

    def __post_init__(self):
        if self.total_count < 1 or not 0 <= self.passed_count <= self.total_count:
            raise ValueError("invalid pass counts")

    @property
    def value(self) -> Fraction:
        return Fraction(self.passed_count, self.total_count)

    @property
    def full(self) -> bool:
        return self.passed_count == self.total_count

    @classmethod
    def of(cls, verdicts) -> "PassRate":
        verdicts = list(verdicts)
        return cls(sum(v.passed for v in verdicts), len(verdicts))


def _trim(data: bytes) -> bytes:
    lines = data.replace(b"\r\n", b"\n").split(b"\n")
    return b"\n".join(line.rstrip() for line in lines).rstrip(b"\n")


def compare_output(actual: bytes, expected: bytes, mode: CompareMode | str = CompareMode.TRIMMED) -> bool:
    mode = CompareMode(mode)
    if mode is CompareMode.EXACT:
        return actual == expected
    if mode is CompareMode.TRIMMED:
        return _trim(actual) == _trim(expected)
    return actual.split() == expected.split()


@dataclass(frozen=True)
class JudgeOutcome:
    verdicts: tuple[TestVerdict, ...]
    pass_rate: PassRate
    results: tuple[ExecutionResult, ...]
    compile_ok: bool


def judge_candidate(
    program: SourceProgram,
    problem: Problem,
    *,
    registry: dict[str, RunnerSpec] | None = None,
    workers: int | None = None,
) -> tuple[list[TestVerdict], PassRate]:
    outcome = judge_detailed(program, problem, registry=registry, workers=workers)
    return list(outcome.verdicts), outcome.pass_rate


def judge_detailed(
    program: SourceProgram,
    problem: Problem,
    *,
    registry: dict[str, RunnerSpec] | None = None,
    workers: int | None = None,
) -> JudgeOutcome:
    """Run every test (never stopping at the first failure) and grade each.

    Environment failures from the sandbox propagate unchanged.
    """
    n = len(problem.tests)
    handle = compile(program, limits=problem.limits, registry=registry)
    if isinstance(handle, CompileError):
        verdicts = tuple(TestVerdict(i, False, FailureKind.COMPILE_ERROR) for i in range(n))
        failed = ExecutionResult(Status.COMPILE_ERROR, b"", handle.diagnostics.encode(), 0.0, 0.0, 0)
        return JudgeOutcome(verdicts, PassRate.of(verdicts), (failed,) * n, False)

    with handle:
        width = max(1, min(workers or default_workers(), n))
        with ThreadPoolExecutor(max_workers=width) as pool:
            results = list(pool.map(lambda t: run(handle, t.input, problem.limits), problem.tests))

    verdicts = []
    for i, (test, res) in enumerate(zip(problem.tests, results)):
        if res.status is Status.OK:
            if compare_output(res.stdout, test.expected_output, test.compare_mode):
                verdicts.append(TestVerdict(i, True))
            else:
                verdicts.append(TestVerdict(i, False, FailureKind.WRONG_ANSWER))
        else:
            verdicts.append(TestVerdict(i, False, _STATUS_FAILURE[res.status]))
    return JudgeOutcome(tuple(verdicts), PassRate.of(verdicts), tuple(results), True)
