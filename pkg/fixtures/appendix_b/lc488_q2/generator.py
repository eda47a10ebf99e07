# Runs of equal small values keep the merge stack busy.
import random
import sys

n, seed = map(int, sys.stdin.read().split())
rng = random.Random(seed)
print(n)
print(*(rng.choice((1, 1, 2, 4)) for _ in range(n)))
