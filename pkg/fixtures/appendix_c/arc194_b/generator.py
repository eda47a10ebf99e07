# Reversed permutation: the maximum number of inversions, n(n-1)/2.
import sys

n, seed = map(int, sys.stdin.read().split())
print(n)
print(*range(n, 0, -1))
