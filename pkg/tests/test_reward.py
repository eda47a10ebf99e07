import itertools
import random
from fractions import Fraction

import pytest

from gatejudge.bundle import Rollout, SourceProgram
from gatejudge.complexity import ComplexityVerdict
from gatejudge.correctness import PassRate
from gatejudge.errors import MissingVerdict
from gatejudge.lattice import ComplexityClass as C
from gatejudge.reward import RewardConfig, compose_reward, format_reward, select_time_optimal, time_reward
from gatejudge.sandbox import CompileError

from oracles import gate_oracle

PROG = SourceProgram("python", "print(1)")
ROLLOUT = Rollout("p", 0, "```python\nprint(1)\n```", PROG)
EMPTY = Rollout("p", 1, "no code here", None)


def verdict(cls, ref=C.CN):
    return ComplexityVerdict(cls).against(ref)


def test_format_reward():
    assert format_reward(ROLLOUT) == 0.1
    assert format_reward(EMPTY) == 0.0
    assert format_reward(ROLLOUT, CompileError("bad")) == 0.0
    assert format_reward(ROLLOUT, True, RewardConfig(w_f=0.2)) == 0.2


def test_time_reward_examples():
    assert time_reward(verdict(C.CN)) == 0.5
    assert time_reward(verdict(C.CLOG)) == 0.5
    assert time_reward(verdict(C.CNLOGN)) == 0.25
    assert time_reward(verdict(C.CN2)) == 0.0
    assert time_reward(verdict(C.CSUPER)) == 0.0
    binary = RewardConfig(per_step_decay=1.0)
    assert time_reward(verdict(C.CNLOGN), binary) == 0.0


def test_time_reward_is_antitone_in_steps():
    values = [time_reward(verdict(c)) for c in C if c >= C.CN]
    assert all(a >= b >= 0 for a, b in zip(values, values[1:]))


def test_compose_examples():
    r = compose_reward(ROLLOUT, PassRate(4, 5), verdict(C.CN), stage="stage2")
    assert not r.gate_open and r.r_time is None and r.total == pytest.approx(0.1 + 0.8)
    r = compose_reward(ROLLOUT, PassRate(5, 5), verdict(C.CN), stage="stage2")
    assert r.gate_open and r.total == pytest.approx(1.6)
    r = compose_reward(ROLLOUT, PassRate(5, 5), verdict(C.CN), stage="stage1")
    assert r.r_time is None and r.total == pytest.approx(1.1)


def test_missing_verdict_when_gate_opens():
    with pytest.raises(MissingVerdict):
        compose_reward(ROLLOUT, PassRate(3, 3), None, stage="stage2")
    assert compose_reward(ROLLOUT, PassRate(2, 3), None, stage="stage2").r_time is None


def test_gate_is_exact_not_approximate():
    near_one = Fraction(10**12 - 1, 10**12)
    assert float(near_one) != 1.0
    r = compose_reward(ROLLOUT, near_one, verdict(C.CN), stage="stage2")
    assert not r.gate_open


def test_total_is_monotone_in_pass_rate():
    for stage, k in itertools.product(("stage1", "stage2"), range(1, 21)):
        totals = [compose_reward(ROLLOUT, PassRate(p, k), verdict(C.CN2), stage=stage).total for p in range(k + 1)]
        assert totals == sorted(totals)


def test_gate_matches_oracle_on_small_grid():
    for k in range(1, 12):
        for p in range(k + 1):
            for stage in ("stage1", "stage2"):
                r = compose_reward(ROLLOUT, PassRate(p, k), verdict(C.CN), stage=stage)
                assert (r.r_time is not None) == gate_oracle(p, k, stage)


def test_compose_is_pure():
    args = (ROLLOUT, PassRate(7, 7), verdict(C.CNLOGN))
    assert compose_reward(*args) == compose_reward(*args)


def test_config_validation_and_mapping():
    with pytest.raises(ValueError):
        RewardConfig(per_step_decay=0)
    cfg = RewardConfig.from_mapping({"w_t": 0.3})
    assert cfg.to_dict() == {"w_f": 0.1, "w_t": 0.3, "per_step_decay": 0.5}


def _cand(tag, passed, cls):
    return (SourceProgram("python", f"# {tag}\n"), PassRate(passed, 4), ComplexityVerdict(cls))


def test_select_time_optimal():
    a, b, c = _cand("a", 4, C.CN), _cand("b", 4, C.CNLOGN), _cand("c", 4, C.CN)
    assert select_time_optimal([a, b, c]) == [a[0], c[0]]
    assert select_time_optimal([_cand("x", 3, C.CN)]) == []
    assert select_time_optimal([b]) == [b[0]]
    # a faster but wrong candidate never wins
    assert select_time_optimal([_cand("w", 3, C.C1), b]) == [b[0]]


def test_select_is_permutation_invariant():
    rng = random.Random(3)
    pool = [_cand(str(i), rng.choice([3, 4]), rng.choice(list(C)[:5])) for i in range(12)]
    want = {p.source for p in select_time_optimal(pool)}
    for _ in range(20):
        rng.shuffle(pool)
        assert {p.source for p in select_time_optimal(pool)} == want
