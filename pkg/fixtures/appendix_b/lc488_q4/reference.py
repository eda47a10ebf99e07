import sys
from typing import List


class Solution:
    def maxScore(self, nums1: List[int], nums2: List[int], k: int) -> int:
        n, m = len(nums1), len(nums2)
        if k == 0:
            return 0
        if k > n or k > m:
            return 0
        prev = [[0] * (m + 1) for _ in range(n + 1)]
        NEG_INF = float('-inf')
        for _ in range(1, k + 1):
            curr = [[NEG_INF] * (m + 1) for _ in range(n + 1)]
            for i in range(1, n + 1):
                num1 = nums1[i - 1]
                for j in range(1, m + 1):
                    num2 = nums2[j - 1]
                    skip_i = curr[i - 1][j]
                    skip_j = curr[i][j - 1]
                    take = prev[i - 1][j - 1] + num1 * num2
                    curr[i][j] = max(skip_i, skip_j, take)
            prev = curr
        return int(prev[n][m])


def main():
    data = sys.stdin.read().split()
    n, m, k = int(data[0]), int(data[1]), int(data[2])
    nums1 = list(map(int, data[3:3 + n]))
    nums2 = list(map(int, data[3 + n:3 + n + m]))
    print(Solution().maxScore(nums1, nums2, k))


if __name__ == "__main__":
    main()
