# Worst case for binary search on the answer: every feasibility check succeeds,
# so each probe scans its whole prefix.  Reads "size seed" from stdin.
import random
import sys

n, seed = map(int, sys.stdin.read().split())
rng = random.Random(seed)
half = n // 2
small = sorted(rng.randint(1, 10**8) for _ in range(half))
top = small[-1] if small else 1
large = sorted(rng.randint(2 * top, 10**9) for _ in range(n - half))
print(n)
print(*(small + large))
