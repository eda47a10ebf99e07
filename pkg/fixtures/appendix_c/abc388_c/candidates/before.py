import sys

def main():
    data = sys.stdin.read().strip().split()
    if not data:
        return
    N = int(data[0])
    A = list(map(int, data[1:1+N]))
    # The input is already sorted, but we sort to be safe.
    A.sort()
    low = 0
    high = N // 2
    while low < high:
        mid = (low + high + 1) // 2
        ok = True
        for i in range(mid):
            if 2 * A[i] > A[N - mid + i]:
                ok = False
                break
        if ok:
            low = mid
        else:
            high = mid - 1
    print(low)

if __name__ == "__main__":
    main()
