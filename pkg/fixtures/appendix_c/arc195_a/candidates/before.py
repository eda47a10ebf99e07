import sys
import bisect
from collections import defaultdict

def main():
    data = sys.stdin.read().strip().split()
    if not data:
        return
    it = iter(data)
    N = int(next(it))
    M = int(next(it))
    A = [int(next(it)) for _ in range(N)]
    B = [int(next(it)) for _ in range(M)]

    # Map each value to the sorted list of indices where it appears in A
    pos_map = defaultdict(list)
    for i, val in enumerate(A):
        pos_map[val].append(i)

    # Find the leftmost (earliest) matching subsequence
    left = []
    pos = -1
    for b in B:
        if b not in pos_map:
            print("No")
            return
        lst = pos_map[b]
        # Find first index > pos
        idx = bisect.bisect_left(lst, pos + 1)
        if idx == len(lst):
            print("No")
            return
        i = lst[idx]
        left.append(i)
        pos = i

    # Find the rightmost (latest) matching subsequence
    right = []
    pos = N
    for b in reversed(B):
        if b not in pos_map:
            print("No")
            return
        lst = pos_map[b]
        # Find last index < pos
        idx = bisect.bisect_left(lst, pos)
        if idx == 0:
            print("No")
            return
        i = lst[idx - 1]
        right.append(i)
        pos = i
    right.reverse()  # restore order to match B

    # If the two subsequences differ in at least one position, answer Yes
    for l, r in zip(left, right):
        if l != r:
            print("Yes")
            return
    print("No")

if __name__ == "__main__":
    main()
