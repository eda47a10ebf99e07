import sys
from typing import List


class Solution:
    def mergeAdjacent(self, nums: List[int]) -> List[int]:
        stack = []
        for num in nums:
            current = num
            while stack and stack[-1] == current:
                current += stack.pop()
            stack.append(current)
        return stack


def main():
    data = sys.stdin.read().split()
    n = int(data[0])
    nums = list(map(int, data[1:1 + n]))
    print(*Solution().mergeAdjacent(nums))


if __name__ == "__main__":
    main()
