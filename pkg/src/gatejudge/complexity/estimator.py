"""Empirical time-complexity estimation from timing curves.

Every fittable class ``g`` gets a single scale constant fitted in log space,
``log c = mean(log t_i - log g(n_i))``; the residual is the RMS of the
remaining log-space error.  Constant factors therefore never influence the
chosen class.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field

from ..bundle import Problem, ResourceLimits, SourceProgram
from ..errors import GeneratorFailure, InputError, InsufficientPoints
from ..sandbox import Artifact, CompileError, RunnerSpec, Status, compile, resolve_runner, run, run_timed
from ..lattice import FITTABLE, ComplexityClass, Order, compare_classes

DEFAULT_SCHEDULE = tuple(2**e for e in range(8, 18))
NOISE_FLOOR = 0.005
TIE_TOLERANCE = 0.05
CONFIDENT_RESIDUAL = 0.25
MIN_POINTS = 4


class Relation(str, enum.Enum):
    BETTER = "better"
    EQUAL = "equal"
    WORSE = "worse"


@dataclass(frozen=True)
class TimingCurve:
    points: tuple[tuple[int, float], ...]
    repeats: int
    noise_floor: float = NOISE_FLOOR
    # Fixed cost subtracted from every raw minimum.
    baseline: float = 0.0
    # Size at which the candidate stopped completing (timeout or crash).
    stopped_at: int | None = None
    stop_status: Status | None = None
    dropped: tuple[int, ...] = ()

    def __post_init__(self):
        sizes = [n for n, _ in self.points]
        if any(n < 1 for n in sizes) or any(a >= b for a, b in zip(sizes, sizes[1:])):
            raise ValueError("curve sizes must be >= 1 and strictly increasing")

    @property
    def timed_out(self) -> bool:
        return self.stop_status is Status.TIMEOUT


@dataclass(frozen=True)
class ComplexityVerdict:
    estimated: ComplexityClass
    residuals: dict[ComplexityClass, float] = field(default_factory=dict)
    confident: bool = False
    relation: Relation | None = None
    steps: int = 0
    source: str = "empirical"

    def against(self, reference: ComplexityClass) -> "ComplexityVerdict":
        """Copy with the relation to a reference class filled in."""
        order, steps = compare_classes(self.estimated, reference)
        relation = {Order.A_BETTER: Relation.BETTER, Order.EQUAL: Relation.EQUAL, Order.B_BETTER: Relation.WORSE}[order]
        return ComplexityVerdict(self.estimated, dict(self.residuals), self.confident, relation, steps, self.source)

    @property
    def satisfies_reference(self) -> bool:
        return self.relation in (Relation.BETTER, Relation.EQUAL)


def fit_residuals(points) -> dict[ComplexityClass, float]:
    """RMS log-space residual of the best single-constant fit for each class."""
    logs = [(n, math.log(t)) for n, t in points]
    k = len(logs)
    out = {}
    for cls in FITTABLE:
        diffs = [lt - cls.log_growth(n) for n, lt in logs]
        log_c = math.fsum(diffs) / k
        out[cls] = math.sqrt(math.fsum((d - log_c) ** 2 for d in diffs) / k)
    return out


def estimate_class(curve: TimingCurve) -> ComplexityVerdict:
    """Pick the class whose fitted curve has the least residual.

    Classes within 5% (relative) of the best residual count as tied and the
    lowest of them wins.  The verdict is confident when the winner's
    residual is at most 0.25 and the runner-up is more than 5% worse.
    """
    if len(curve.points) < MIN_POINTS:
        raise InsufficientPoints(f"need {MIN_POINTS} timing points above the noise floor, have {len(curve.points)}")
    if any(t <= 0 for _, t in curve.points):
        raise ValueError("timings must be positive")
    residuals = fit_residuals(curve.points)
    best = min(residuals.values())
    chosen = min(c for c, r in residuals.items() if r <= best * (1 + TIE_TOLERANCE))
    r_chosen = residuals[chosen]
    runner_up = min(r for c, r in residuals.items() if c is not chosen)
    confident = r_chosen <= CONFIDENT_RESIDUAL and runner_up > r_chosen * (1 + TIE_TOLERANCE)
    return ComplexityVerdict(chosen, residuals, confident)


# ---------------------------------------------------------------------------
# measurement


@dataclass(frozen=True)
class EstimatorConfig:
    schedule: tuple[int, ...] = DEFAULT_SCHEDULE
    repeats: int = 5
    noise_floor: float = NOISE_FLOOR
    # Wall-clock cap per timed run; a timeout caps the curve at that size.
    size_timeout: float = 5.0
    seed: int = 0
    baseline_repeats: int = 11
    # Cheap sizes are re-run until this much wall time is spent (at most
    # max_repeats runs), so the minimum of small timings settles too.
    min_time: float = 0.5
    max_repeats: int = 25

    def schedule_for(self, problem: Problem) -> tuple[int, ...]:
        return problem.size_schedule or self.schedule


class InputCache:
    """Generated inputs keyed by (problem id, size, seed), shared across candidates."""

    def __init__(self, registry: dict[str, RunnerSpec] | None = None):
        self.registry = registry
        self._data: dict[tuple[str, int, int], bytes] = {}
        self._lock = threading.Lock()

    def get(self, problem: Problem, size: int, seed: int) -> bytes:
        key = (problem.id, size, seed)
        with self._lock:
            if key in self._data:
                return self._data[key]
            handle = compile(problem.input_generator, limits=problem.limits, registry=self.registry)
            if isinstance(handle, CompileError):
                raise GeneratorFailure(size, handle.diagnostics)
            with handle:
                res = run(handle, f"{size} {seed}\n".encode(), problem.limits)
            if not res.ok or not res.stdout.strip():
                detail = res.stderr.decode("utf-8", "replace").strip()[-500:]
                raise GeneratorFailure(size, f"{res.status.value} {detail}".strip())
            self._data[key] = res.stdout
            return res.stdout


_baselines: dict[str, float] = {}
_baseline_lock = threading.Lock()


def startup_baseline(runner: RunnerSpec, limits: ResourceLimits, repeats: int = 11) -> float:
    """Minimum wall time of a do-nothing program for this runner (0 if none is known)."""
    with _baseline_lock:
        if runner.language_tag in _baselines:
            return _baselines[runner.language_tag]
        value = 0.0
        if runner.noop_source:
            handle = compile(SourceProgram(runner.language_tag, runner.noop_source), runner, limits)
            if isinstance(handle, Artifact):
                with handle:
                    results = run_timed(handle, b"", limits, repeats)
                ok = [r.wall_time for r in results if r.ok]
                value = min(ok) if ok else 0.0
        _baselines[runner.language_tag] = value
        return value


def _timing_limits(problem: Problem, config: EstimatorConfig) -> ResourceLimits:
    wall = min(problem.limits.wall_timeout, config.size_timeout)
    return ResourceLimits(
        wall_timeout=wall,
        cpu_timeout=min(problem.limits.cpu_timeout, wall),
        memory_cap=problem.limits.memory_cap,
        output_cap=problem.limits.output_cap,
    )


def measure_curve(
    program: SourceProgram,
    problem: Problem,
    schedule: tuple[int, ...] | None = None,
    *,
    config: EstimatorConfig | None = None,
    cache: InputCache | None = None,
    registry: dict[str, RunnerSpec] | None = None,
) -> TimingCurve:
    """Time ``program`` on generated inputs of increasing size.

    For each size the minimum wall time over ``config.repeats`` runs is
    taken, less a fixed cost: the program's own time on a size-1 input
    (start-up plus imports), never below the runner's do-nothing baseline.
    A point is kept only if its net time clears both the noise floor and
    the fixed cost itself; below that, jitter in the subtracted cost
    dominates the slope.  If that leaves at most one
    point the time does not grow with ``n``, and the curve falls back to
    subtracting only the runner baseline.

    The first size at which the program fails to finish (timeout, crash)
    ends the curve; that size is reported in ``stopped_at``.  Raises
    :class:`InsufficientPoints` when fewer than four points survive and the
    curve was not cut short.
    """
    config = config or EstimatorConfig()
    schedule = tuple(schedule or config.schedule_for(problem))
    if any(a >= b for a, b in zip(schedule, schedule[1:])) or not schedule or schedule[0] < 1:
        raise ValueError("schedule must be strictly increasing positive sizes")
    cache = cache or InputCache(registry)
    limits = _timing_limits(problem, config)
    runner = resolve_runner(program.language_tag, registry)
    handle = compile(program, runner, limits)
    if isinstance(handle, CompileError):
        raise InputError(f"candidate does not compile: {handle.diagnostics[:200]}")
    startup = startup_baseline(runner, limits, config.baseline_repeats)

    with handle:
        fixed, raw, stopped_at, stop_status = _interleaved_minima(handle, problem, schedule, limits, config, cache)

    baseline = max(startup, fixed if fixed is not None else startup)
    points, dropped = _net_points(raw, baseline, config.noise_floor)
    if len(points) < 2 and baseline > startup:
        baseline = startup
        points, dropped = _net_points(raw, baseline, config.noise_floor)
    curve = TimingCurve(tuple(points), config.repeats, config.noise_floor, baseline, stopped_at, stop_status, tuple(dropped))
    if len(points) < MIN_POINTS and stopped_at is None:
        raise InsufficientPoints(
            f"{problem.id}: only {len(points)} of {len(schedule)} sizes rose above the {config.noise_floor}s noise floor"
        )
    return curve


PROBE_SIZE = 1


def _interleaved_minima(handle, problem, schedule, limits, config, cache):
    """Best wall time per size, with repeats taken round-robin across sizes.

    A transient slowdown then lands on every size a little instead of on one
    size entirely.  The size-1 probe rides along as an extra slot; its
    failure (or a generator that rejects size 1) just leaves it out.

    Returns (probe time or None, [(size, best)], stopped_at, stop_status).
    """
    slots = []  # [size, data, min_runs, times]
    try:
        slots.append([None, cache.get(problem, PROBE_SIZE, config.seed), max(config.repeats, config.baseline_repeats), []])
    except GeneratorFailure:
        pass
    stopped_at, stop_status = None, None

    def once(slot):
        res = run_timed(handle, slot[1], limits, 1)[-1]
        if res.ok:
            slot[3].append(res.wall_time)
        return res

    # First pass in ascending order: the first size that fails ends the curve.
    if slots and not once(slots[0]).ok:
        slots.clear()
    for size in schedule:
        slot = [size, cache.get(problem, size, config.seed), config.repeats, []]
        res = once(slot)
        if not res.ok:
            stopped_at, stop_status = size, res.status
            break
        slots.append(slot)

    def wanted(slot):
        n, spent = len(slot[3]), sum(slot[3])
        return n < slot[2] or (spent < config.min_time and n < config.max_repeats)

    while any(wanted(s) for s in slots):
        for slot in [s for s in slots if wanted(s)]:
            if not any(s is slot for s in slots):
                continue
            res = once(slot)
            if res.ok:
                continue
            if slot[0] is None:
                slots = [s for s in slots if s is not slot]
            else:
                stopped_at, stop_status = slot[0], res.status
                slots = [s for s in slots if s[0] is None or s[0] < slot[0]]

    fixed = next((min(s[3]) for s in slots if s[0] is None), None)
    raw = [(s[0], min(s[3])) for s in slots if s[0] is not None]
    return fixed, raw, stopped_at, stop_status


def _net_points(raw, baseline: float, floor: float):
    points, dropped = [], []
    floor = max(floor, baseline)
    for size, t in raw:
        if t - baseline >= floor:
            points.append((size, t - baseline))
        else:
            dropped.append(size)
    return points, dropped
