import sys
from typing import List


class Solution:
    def dominantIndices(self, nums: List[int]) -> int:
        n = len(nums)
        if n <= 1:
            return 0
        count = 0
        suffix_sum = 0  # sum of nums[i+1:]
        for i in range(n - 2, -1, -1):
            suffix_sum += nums[i + 1]
            length = n - i - 1
            if nums[i] * length > suffix_sum:
                count += 1
        return count


def main():
    data = sys.stdin.read().split()
    n = int(data[0])
    nums = list(map(int, data[1:1 + n]))
    print(Solution().dominantIndices(nums))


if __name__ == "__main__":
    main()
