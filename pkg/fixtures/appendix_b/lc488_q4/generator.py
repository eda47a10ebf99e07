# Square instances with a fixed number of pairs: the DP costs k * n * m.
import random
import sys

n, seed = map(int, sys.stdin.read().split())
rng = random.Random(seed)
k = min(3, n)
print(n, n, k)
print(*(rng.randint(-100, 100) for _ in range(n)))
print(*(rng.randint(-100, 100) for _ in range(n)))
