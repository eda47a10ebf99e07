import random
import sys

n, seed = map(int, sys.stdin.read().split())
rng = random.Random(seed)
print(n)
print(*(rng.randint(1, 10**5) for _ in range(n)))
