# One repeated value with M = N: the longest occurrence lists, so every
# binary search in the index-map approach runs over N positions.
import sys

n, seed = map(int, sys.stdin.read().split())
print(n, n)
print(*([1] * n))
print(*([1] * n))
