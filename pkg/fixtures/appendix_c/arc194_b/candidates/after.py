import sys

def solve() -> None:
    input = sys.stdin.readline
    N = int(input())
    P = list(map(int, input().split()))

    # Fenwick tree (1-indexed)
    bit = [0] * (N + 2)

    def update(i: int, delta: int) -> None:
        while i <= N:
            bit[i] += delta
            i += i & -i

    def query(i: int) -> int:
        s = 0
        while i > 0:
            s += bit[i]
            i -= i & -i
        return s

    total_cost = 0
    for val in P:
        # number of smaller elements to the left of 'val'
        cnt = query(val - 1)
        p0 = cnt + 1          # position of 'val' after larger elements to its left have passed
        if p0 < val:
            terms = val - p0   # number of right moves needed
            # sum from p0 to val-1 inclusive
            total_cost += (p0 + val - 1) * terms // 2
        update(val, 1)

    print(total_cost)

if __name__ == "__main__":
    solve()
