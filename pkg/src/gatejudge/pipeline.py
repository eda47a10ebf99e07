"""Batch judging: rollouts in, records out.

The CLI's ``score`` and ``filter`` commands are thin wrappers over
:func:`score_rollouts` and :func:`filter_rollouts`.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from .bundle import Problem, Rollout, extract_program
from .complexity import ComplexityJudge, ComplexityVerdict, EmpiricalJudge, judge_complexity
from .correctness import PassRate, judge_detailed
from .errors import InputError, InsufficientPoints, UnknownProblemId
from .grouprl import (
    DEFAULT_BAND,
    DEFAULT_EPSILON,
    FilterDecision,
    RolloutGroup,
    compute_advantages,
    stage1_filter,
    stage2_filter,
)
from .records import JudgeResult, RecordStore
from .reward import RewardBreakdown, RewardConfig, Stage, compose_reward
from .sandbox import RunnerSpec

log = logging.getLogger(__name__)


def load_rollouts(path: str | Path, language_hints: Iterable[str] = ("python",)) -> list[Rollout]:
    """Read line-delimited rollouts: ``{"problem_id", "rollout_index", "response"}``."""
    hints = list(language_hints)
    rollouts, seen = [], set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            pid, idx, text = rec["problem_id"], rec["rollout_index"], rec["response"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"{path}:{lineno}: malformed rollout ({exc})") from None
        if not isinstance(idx, int) or idx < 0 or not isinstance(pid, str) or not isinstance(text, str):
            raise InputError(f"{path}:{lineno}: malformed rollout fields")
        if (pid, idx) in seen:
            raise InputError(f"{path}:{lineno}: duplicate rollout {pid}#{idx}")
        seen.add((pid, idx))
        rollouts.append(Rollout(pid, idx, text, extract_program(text, hints)))
    rollouts.sort(key=lambda r: (r.problem_id, r.rollout_index))
    return rollouts


@dataclass
class RolloutScore:
    rollout: Rollout
    judge: JudgeResult
    reward: RewardBreakdown
    verdict: ComplexityVerdict | None = None
    estimation_error: str | None = None


@dataclass
class ScoreRun:
    scores: list[RolloutScore] = field(default_factory=list)
    decisions: list[FilterDecision] = field(default_factory=list)
    partial: bool = False


def _check_ids(problems: dict[str, Problem], rollouts: list[Rollout]) -> None:
    for r in rollouts:
        if r.problem_id not in problems:
            raise UnknownProblemId(r.problem_id)


def judge_rollout(
    rollout: Rollout,
    problem: Problem,
    store: RecordStore | None,
    registry: dict[str, RunnerSpec] | None,
    workers: int | None,
) -> JudgeResult:
    ref = {"problem_id": rollout.problem_id, "rollout_index": rollout.rollout_index}
    if rollout.extracted_program is None:
        return JudgeResult((), PassRate(0, len(problem.tests)), False, extracted=False)
    outcome = judge_detailed(rollout.extracted_program, problem, registry=registry, workers=workers)
    if store is not None:
        for i, res in enumerate(outcome.results):
            store.append(res, {**ref, "test_index": i})
    return JudgeResult(outcome.verdicts, outcome.pass_rate, outcome.compile_ok)


def score_rollouts(
    problems: dict[str, Problem],
    rollouts: list[Rollout],
    stage: Stage | str,
    config: RewardConfig,
    store: RecordStore | None = None,
    *,
    judge: ComplexityJudge | None = None,
    registry: dict[str, RunnerSpec] | None = None,
    workers: int | None = None,
    band: tuple[int, int] = DEFAULT_BAND,
    epsilon: float = DEFAULT_EPSILON,
) -> ScoreRun:
    """Judge and reward every rollout, then filter and standardize per problem.

    Complexity is only estimated for rollouts whose gate is open (stage 2,
    every test passed).  A gate-open rollout whose estimate cannot be formed
    gets ``r_time = 0`` and marks the run partial.
    """
    stage = Stage(stage)
    _check_ids(problems, rollouts)
    if stage is Stage.STAGE2 and judge is None:
        judge = EmpiricalJudge(registry=registry)
    run = ScoreRun()

    for rollout in rollouts:
        problem = problems[rollout.problem_id]
        ref = {"problem_id": rollout.problem_id, "rollout_index": rollout.rollout_index}
        result = judge_rollout(rollout, problem, store, registry, workers)
        if store is not None:
            store.append(result, ref)
        verdict, error = None, None
        compile_outcome = result.compile_ok if result.extracted else None
        if stage is Stage.STAGE2 and result.pass_rate.full:
            try:
                verdict = judge_complexity(rollout.extracted_program, problem, judge)
            except InsufficientPoints as exc:
                error = str(exc)
                run.partial = True
                log.warning("complexity estimate unavailable for %s#%d: %s", rollout.problem_id, rollout.rollout_index, exc)
            if verdict is not None and store is not None:
                store.append(verdict, ref)
        if error is not None:
            base = compose_reward(rollout, result.pass_rate, None, config, Stage.STAGE1, compile_outcome=compile_outcome)
            reward = RewardBreakdown(base.r_format, base.r_correctness, 0.0, True, base.total)
        else:
            reward = compose_reward(rollout, result.pass_rate, verdict, config, stage, compile_outcome=compile_outcome)
        if store is not None:
            store.append(reward, ref)
        run.scores.append(RolloutScore(rollout, result, reward, verdict, error))

    by_problem: dict[str, list[RolloutScore]] = defaultdict(list)
    for s in run.scores:
        by_problem[s.rollout.problem_id].append(s)
    for pid in sorted(by_problem):
        group = by_problem[pid]
        decision = _filter_group(pid, group, stage, band)
        run.decisions.append(decision)
        if store is not None:
            store.append(decision, {"problem_id": pid})
        if len(group) >= 2:
            adv = compute_advantages(RolloutGroup.from_rewards(pid, [s.reward.total for s in group]), epsilon)
            if store is not None:
                store.append(adv, {"problem_id": pid})
    return run


def success_flag(score: RolloutScore, stage: Stage) -> bool:
    if stage is Stage.STAGE1:
        return score.judge.pass_rate.full
    return score.judge.pass_rate.full and score.verdict is not None and score.verdict.satisfies_reference


def _filter_group(pid: str, group: list[RolloutScore], stage: Stage, band: tuple[int, int]) -> FilterDecision:
    flags = [success_flag(s, stage) for s in group]
    g = RolloutGroup.from_flags(pid, flags)
    return stage1_filter(g, band) if stage is Stage.STAGE1 else stage2_filter(g, band)


def filter_rollouts(
    problems: dict[str, Problem],
    rollouts: list[Rollout],
    criterion: str,
    band: tuple[int, int] = DEFAULT_BAND,
    store: RecordStore | None = None,
    **kwargs: Any,
) -> list[FilterDecision]:
    """One filter decision per problem under the difficulty or complexity criterion."""
    stage = Stage.STAGE1 if criterion == "difficulty" else Stage.STAGE2
    run = score_rollouts(problems, rollouts, stage, RewardConfig(), None, band=band, **kwargs)
    if store is not None:
        for d in run.decisions:
            store.append(d, {"problem_id": d.problem_id})
    return run.decisions
