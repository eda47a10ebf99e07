import sys

def main():
    data = sys.stdin.read().split()
    if not data:
        return
    it = iter(data)
    N = int(next(it))
    M = int(next(it))
    A = [int(next(it)) for _ in range(N)]
    B = [int(next(it)) for _ in range(M)]
    
    # leftmost matching indices
    left = []
    j = 0
    for i in range(N):
        if j < M and A[i] == B[j]:
            left.append(i)
            j += 1
            if j == M:
                break
    if j < M:
        print("No")
        return
    
    # rightmost matching indices
    right = []
    j = M - 1
    for i in range(N-1, -1, -1):
        if j >= 0 and A[i] == B[j]:
            right.append(i)
            j -= 1
            if j < 0:
                break
    right.reverse()
    
    # compare left and right
    for k in range(M):
        if left[k] != right[k]:
            print("Yes")
            return
    print("No")

if __name__ == "__main__":
    main()
