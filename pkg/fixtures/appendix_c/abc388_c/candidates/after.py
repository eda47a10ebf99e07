import sys

def main():
    data = sys.stdin.read().strip().split()
    if not data:
        return
    N = int(data[0])
    A = list(map(int, data[1:1+N]))
    # A is already sorted in non-decreasing order as per input specification.
    i = 0
    j = N // 2
    count = 0
    while i < N // 2 and j < N:
        if A[i] * 2 <= A[j]:
            count += 1
            i += 1
            j += 1
        else:
            j += 1
    print(count)

if __name__ == "__main__":
    main()
