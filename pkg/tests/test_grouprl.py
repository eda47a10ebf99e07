import random

import pytest

from gatejudge.errors import EmptyDomainList, GroupTooSmall
from gatejudge.grouprl import Criterion, RolloutGroup, compute_advantages, sample_mixture, stage1_filter, stage2_filter

from oracles import advantages_oracle, all_flag_patterns, band_oracle, largest_remainder_oracle


def test_advantage_examples():
    adv = compute_advantages(RolloutGroup.from_rewards("p", [1, 1, 0, 0]))
    assert adv.advantages == (1.0, 1.0, -1.0, -1.0)
    flat = compute_advantages(RolloutGroup.from_rewards("p", [0.7] * 4))
    assert flat.advantages == (0.0,) * 4
    with pytest.raises(GroupTooSmall):
        compute_advantages(RolloutGroup.from_rewards("p", [1.0]))


def test_advantages_match_extended_precision():
    rng = random.Random(8)
    for _ in range(200):
        rewards = [rng.uniform(-3, 3) for _ in range(8)]
        got = compute_advantages(RolloutGroup.from_rewards("p", rewards)).advantages
        assert max(abs(a - b) for a, b in zip(got, advantages_oracle(rewards))) < 1e-9


def test_advantages_are_standardized_and_invariant():
    rng = random.Random(9)
    for _ in range(100):
        rewards = [rng.uniform(0, 2) for _ in range(8)]
        base = compute_advantages(RolloutGroup.from_rewards("p", rewards)).advantages
        assert abs(sum(base)) < 1e-9
        assert abs(sum(a * a for a in base) / 8 - 1) < 1e-9
        shift, scale = rng.uniform(-5, 5), rng.uniform(0.1, 10)
        moved = compute_advantages(RolloutGroup.from_rewards("p", [scale * r + shift for r in rewards])).advantages
        assert max(abs(a - b) for a, b in zip(base, moved)) < 1e-9


def test_filter_examples():
    def k_of(k):
        return RolloutGroup.from_flags("p", [True] * k + [False] * (8 - k))

    assert not stage1_filter(k_of(0)).kept
    assert stage1_filter(k_of(3)).kept
    assert not stage1_filter(k_of(8)).kept
    assert stage2_filter(k_of(5)).kept
    assert not stage2_filter(k_of(6)).kept
    assert stage2_filter(k_of(5)).criterion is Criterion.COMPLEXITY


@pytest.mark.parametrize("band", [(1, 5), (0, 8), (2, 3)])
def test_filters_match_brute_force(band):
    for flags in all_flag_patterns(8):
        g = RolloutGroup.from_flags("p", flags)
        for decide in (stage1_filter, stage2_filter):
            d = decide(g, band)
            assert d.kept == band_oracle(flags, band)
            assert d.k == sum(flags) and d.n == 8


def test_filter_ignores_order():
    rng = random.Random(2)
    for flags in all_flag_patterns(8)[::7]:
        shuffled = list(flags)
        rng.shuffle(shuffled)
        assert stage1_filter(RolloutGroup.from_flags("p", flags)) == stage1_filter(RolloutGroup.from_flags("p", shuffled))


def test_bad_band():
    with pytest.raises(ValueError):
        stage1_filter(RolloutGroup.from_flags("p", [True] * 8), (5, 1))


SFT_MIX = [("code", 27), ("deep-search", 26), ("stem", 23), ("tool-use", 13), ("general", 10)]


def test_mixture_trivial_cases():
    assert sample_mixture([("only", 0.3)], 7) == [("only", 7)]
    assert [c for _, c in sample_mixture([(str(i), 1) for i in range(4)], 8)] == [2, 2, 2, 2]
    with pytest.raises(EmptyDomainList):
        sample_mixture([], 10)


def test_mixture_matches_largest_remainder():
    counts = [c for _, c in sample_mixture(SFT_MIX, 10000)]
    want, tied, _ = largest_remainder_oracle([w for _, w in SFT_MIX], 10000)
    assert not tied
    assert counts == want == [2728, 2626, 2323, 1313, 1010]


def test_mixture_random_weights_and_seeded_ties():
    rng = random.Random(4)
    for _ in range(300):
        weights = [rng.choice([1, 2, 3, rng.randint(1, 50)]) for _ in range(rng.randint(1, 7))]
        total = rng.randint(1, 500)
        seed = rng.randint(0, 99)
        counts = [c for _, c in sample_mixture([(str(i), w) for i, w in enumerate(weights)], total, seed)]
        want, tied, left = largest_remainder_oracle(weights, total)
        assert sum(counts) == total
        s = sum(weights)
        assert all(abs(c - total * w / s) < 1 for c, w in zip(counts, weights))
        fixed = [i for i in range(len(weights)) if i not in tied]
        assert [counts[i] for i in fixed] == [want[i] for i in fixed]
        assert sum(counts[i] - want[i] for i in tied) == left
        assert counts == [c for _, c in sample_mixture([(str(i), w) for i, w in enumerate(weights)], total, seed)]
