import random
import sys

n, seed = map(int, sys.stdin.read().split())
rng = random.Random(seed)
print(n, 10**6)
print(*(rng.randint(1, 10**4) for _ in range(n)))
