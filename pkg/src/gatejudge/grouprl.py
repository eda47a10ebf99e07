"""Group-level RL math: group-normalized advantages, on-policy filters, mixture apportionment."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EmptyDomainList, GroupTooSmall

DEFAULT_BAND = (1, 5)
DEFAULT_EPSILON = 1e-8


class Criterion(str, enum.Enum):
    DIFFICULTY = "difficulty"
    COMPLEXITY = "complexity"


@dataclass(frozen=True)
class RolloutGroup:
    problem_id: str
    rewards: tuple[float, ...]
    success_flags: tuple[bool, ...]

    def __post_init__(self):
        if len(self.rewards) != len(self.success_flags):
            raise ValueError("rewards and success_flags differ in length")

    @classmethod
    def from_rewards(cls, problem_id: str, rewards: Sequence[float]) -> "RolloutGroup":
        return cls(problem_id, tuple(rewards), (False,) * len(rewards))

    @classmethod
    def from_flags(cls, problem_id: str, flags: Sequence[bool]) -> "RolloutGroup":
        return cls(problem_id, (0.0,) * len(flags), tuple(bool(f) for f in flags))


@dataclass(frozen=True)
class AdvantageSet:
    problem_id: str
    advantages: tuple[float, ...]
    group_mean: float
    group_std: float


@dataclass(frozen=True)
class FilterDecision:
    problem_id: str
    k: int
    n: int
    kept: bool
    criterion: Criterion
    band: tuple[int, int] = DEFAULT_BAND


def compute_advantages(group: RolloutGroup, epsilon: float = DEFAULT_EPSILON) -> AdvantageSet:
    """Standardize rewards within the group with the population std.

    Groups whose std is at most ``epsilon`` get all-zero advantages.
    """
    n = len(group.rewards)
    if n < 2:
        raise GroupTooSmall(f"group {group.problem_id!r} has {n} rollouts; need at least 2")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    mean = math.fsum(group.rewards) / n
    std = math.sqrt(math.fsum((r - mean) ** 2 for r in group.rewards) / n)
    if std <= epsilon:
        return AdvantageSet(group.problem_id, (0.0,) * n, mean, std)
    return AdvantageSet(group.problem_id, tuple((r - mean) / std for r in group.rewards), mean, std)


def _band_filter(group: RolloutGroup, band: tuple[int, int], criterion: Criterion) -> FilterDecision:
    n = len(group.success_flags)
    k_min, k_max = band
    if not 0 <= k_min <= k_max <= n:
        raise ValueError(f"band {band} must satisfy 0 <= k_min <= k_max <= {n}")
    k = sum(group.success_flags)
    return FilterDecision(group.problem_id, k, n, k_min <= k <= k_max, criterion, (k_min, k_max))


def stage1_filter(group: RolloutGroup, band: tuple[int, int] = DEFAULT_BAND) -> FilterDecision:
    """Difficulty filter; flags mark rollouts that pass every test."""
    return _band_filter(group, band, Criterion.DIFFICULTY)


def stage2_filter(group: RolloutGroup, band: tuple[int, int] = DEFAULT_BAND) -> FilterDecision:
    """Complexity filter; flags mark rollouts that are fully correct *and* meet the reference class."""
    return _band_filter(group, band, Criterion.COMPLEXITY)


def sample_mixture(domains: Sequence[tuple[str, float]], total: int, seed: int = 0) -> list[tuple[str, int]]:
    """Largest-remainder apportionment of ``total`` items over weighted domains.

    Proportions are normalized first, so they need not sum to 1 (or 100).
    Equal remainders are ordered by a permutation drawn from ``seed``.
    """
    if not domains:
        raise EmptyDomainList("at least one domain is required")
    if total < 1:
        raise ValueError("total must be >= 1")
    weights = [Fraction(p) for _, p in domains]
    if any(w <= 0 for w in weights):
        raise ValueError("proportions must be positive")
    norm = sum(weights)
    quotas = [total * w / norm for w in weights]
    counts = [math.floor(q) for q in quotas]
    left = total - sum(counts)
    tiebreak = list(range(len(domains)))
    random.Random(seed).shuffle(tiebreak)
    order = sorted(range(len(domains)), key=lambda i: (-(quotas[i] - counts[i]), tiebreak[i]))
    for i in order[:left]:
        counts[i] += 1
    return [(name, c) for (name, _), c in zip(domains, counts)]
