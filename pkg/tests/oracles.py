"""Independent reference computations used as test oracles.

None of these import the engine; they are written from the definitions.
"""

from __future__ import annotations

from decimal import Decimal, getcontext
from fractions import Fraction
from itertools import product


def gate_oracle(passed: int, total: int, stage: str) -> bool:
    """Time reward applies iff every test passed and we are in stage 2."""
    return stage == "stage2" and passed == total


def band_oracle(flags, band) -> bool:
    k = 0
    for f in flags:
        if f:
            k += 1
    lo, hi = band
    return lo <= k and k <= hi


def all_flag_patterns(n: int = 8):
    return [tuple(bits) for bits in product((False, True), repeat=n)]


def advantages_oracle(rewards, epsilon: float = 1e-8, digits: int = 60):
    getcontext().prec = digits
    xs = [Decimal(r) for r in rewards]
    n = Decimal(len(xs))
    mean = sum(xs) / n
    var = sum((x - mean) ** 2 for x in xs) / n
    std = var.sqrt()
    if std <= Decimal(epsilon):
        return [0.0] * len(xs)
    return [float((x - mean) / std) for x in xs]


def largest_remainder_oracle(weights, total: int):
    """Hamilton apportionment on exact rationals.

    Returns (counts, tied) where ``tied`` lists the indices whose remainder
    equals the cut-off remainder, i.e. where any tie-break is legitimate.
    """
    w = [Fraction(x) for x in weights]
    s = sum(w)
    quotas = [Fraction(total) * x / s for x in w]
    floors = [q.numerator // q.denominator for q in quotas]
    rems = [q - f for q, f in zip(quotas, floors)]
    left = total - sum(floors)
    ranked = sorted(set(rems), reverse=True)
    counts = list(floors)
    tied = []
    for r in ranked:
        if left == 0:
            break
        idx = [i for i, x in enumerate(rems) if x == r]
        if left >= len(idx):
            for i in idx:
                counts[i] += 1
            left -= len(idx)
        else:
            tied = idx
            break
    return counts, tied, left


def swap_loss_oracle(forward, backward):
    terms = [Fraction(f) + Fraction(b) for f, b in zip(forward, backward)]
    return float(sum(t * t for t in terms) / len(terms))


def central_difference(fn, theta, h: float = 1e-6):
    import numpy as np

    grad = np.zeros_like(theta)
    for i in range(len(theta)):
        up, down = theta.copy(), theta.copy()
        up[i] += h
        down[i] -= h
        grad[i] = (fn(up) - fn(down)) / (2 * h)
    return grad
