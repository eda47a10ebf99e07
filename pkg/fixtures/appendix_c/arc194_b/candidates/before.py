import sys
import heapq

def solve():
    data = sys.stdin.read().strip().split()
    if not data:
        return
    it = iter(data)
    N = int(next(it))
    P = [0] + [int(next(it)) for _ in range(N)]  # 1-indexed

    # Initialize a min-heap with all adjacent inversions
    heap = []
    for i in range(1, N):
        if P[i] > P[i + 1]:
            heapq.heappush(heap, i)

    total_cost = 0
    while heap:
        i = heapq.heappop(heap)
        # Check if the inversion still exists (it might have been fixed already)
        if not (P[i] > P[i + 1]):
            continue
        # Perform the swap
        P[i], P[i + 1] = P[i + 1], P[i]
        total_cost += i
        # After swapping, check the three affected positions for new inversions
        for idx in (i - 1, i, i + 1):
            if 1 <= idx < N and P[idx] > P[idx + 1]:
                heapq.heappush(heap, idx)

    print(total_cost)

if __name__ == "__main__":
    solve()
