import sys
from collections import deque
from typing import List


class Solution:
    def countSubarrays(self, nums: List[int], k: int) -> int:
        if not nums or k < 0:
            return 0
        n = len(nums)
        dq_max = deque()
        dq_min = deque()
        l = 0
        ans = 0
        for r in range(n):
            while dq_max and nums[dq_max[-1]] <= nums[r]:
                dq_max.pop()
            dq_max.append(r)
            while dq_min and nums[dq_min[-1]] >= nums[r]:
                dq_min.pop()
            dq_min.append(r)
            cur_max = nums[dq_max[0]]
            cur_min = nums[dq_min[0]]
            length = r - l + 1
            cost = (cur_max - cur_min) * length
            while cost > k and l <= r:
                if dq_max[0] == l:
                    dq_max.popleft()
                if dq_min[0] == l:
                    dq_min.popleft()
                l += 1
                if l > r:
                    break
                cur_max = nums[dq_max[0]]
                cur_min = nums[dq_min[0]]
                length = r - l + 1
                cost = (cur_max - cur_min) * length
            if l <= r:
                ans += (r - l + 1)
        return ans


def main():
    data = sys.stdin.read().split()
    n, k = int(data[0]), int(data[1])
    nums = list(map(int, data[2:2 + n]))
    print(Solution().countSubarrays(nums, k))


if __name__ == "__main__":
    main()
