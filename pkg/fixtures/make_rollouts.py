"""Write fixtures/appendix_b/rollouts.jsonl: eight hand-made rollouts per problem.

Each group mixes correct, slow-but-correct, wrong, crashing and code-free
responses so every scoring path is exercised.
"""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent


def fence(code, lang="python"):
    return f"```{lang}\n{code.strip()}\n```"


def ref(pid):
    return (HERE / "appendix_b" / pid / "reference.py").read_text()


READ_ARRAY = """
import sys
data = sys.stdin.read().split()
n = int(data[0])
nums = list(map(int, data[1:1 + n]))
"""

Q1_BRUTE = READ_ARRAY + """
count = 0
for i in range(n):
    rest = nums[i + 1:]
    if not rest or nums[i] * len(rest) > sum(rest):
        count += 1 if rest else 0
print(count)
"""
Q1_GE = READ_ARRAY + """
count, s = 0, 0
for i in range(n - 2, -1, -1):
    s += nums[i + 1]
    if nums[i] * (n - i - 1) >= s:
        count += 1
print(count)
"""
Q1_FLOAT_AVG_ALL = READ_ARRAY + """
avg = sum(nums) / n
print(sum(1 for x in nums[:-1] if x > avg))
"""
Q1_CRASH = READ_ARRAY + """
s = 0
count = 0
for i in range(n - 1, -1, -1):
    s += nums[i + 1]
    count += nums[i] * (n - i - 1) > s
print(count)
"""

Q2_QUADRATIC = READ_ARRAY + """
changed = True
while changed:
    changed = False
    for i in range(len(nums) - 1):
        if nums[i] == nums[i + 1]:
            nums[i:i + 2] = [nums[i] * 2]
            changed = True
            break
print(*nums)
"""
Q2_ONE_PASS = READ_ARRAY + """
out = []
for x in nums:
    if out and out[-1] == x:
        out[-1] *= 2
    else:
        out.append(x)
print(*out)
"""
Q2_BRACKETS = READ_ARRAY + """
st = []
for x in nums:
    while st and st[-1] == x:
        x += st.pop()
    st.append(x)
print(st)
"""
Q2_CPP = """
#include <cstdio>
#include <vector>
int main() {
    int n; if (scanf("%d", &n) != 1) return 0;
    std::vector<long long> st;
    for (int i = 0; i < n; ++i) {
        long long x; scanf("%lld", &x);
        while (!st.empty() && st.back() == x) { x += st.back(); st.pop_back(); }
        st.push_back(x);
    }
    for (size_t i = 0; i < st.size(); ++i) printf(i ? " %lld" : "%lld", st[i]);
    printf("\\n");
}
"""

Q3_BRUTE = """
import sys
data = sys.stdin.read().split()
n, k = int(data[0]), int(data[1])
nums = list(map(int, data[2:2 + n]))
ans = 0
for l in range(n):
    hi = lo = nums[l]
    for r in range(l, n):
        hi = max(hi, nums[r]); lo = min(lo, nums[r])
        if (hi - lo) * (r - l + 1) <= k:
            ans += 1
        else:
            break
print(ans)
"""
Q3_IGNORE_LENGTH = """
import sys
data = sys.stdin.read().split()
n, k = int(data[0]), int(data[1])
nums = list(map(int, data[2:2 + n]))
ans = 0
for l in range(n):
    hi = lo = nums[l]
    for r in range(l, n):
        hi = max(hi, nums[r]); lo = min(lo, nums[r])
        if hi - lo <= k:
            ans += 1
print(ans)
"""
Q3_SYNTAX = """
import sys
def solve(
    data = sys.stdin.read().split()
print(0)
"""

Q4_BRUTE = """
import sys
from functools import lru_cache
data = sys.stdin.read().split()
n, m, k = int(data[0]), int(data[1]), int(data[2])
a = list(map(int, data[3:3 + n]))
b = list(map(int, data[3 + n:3 + n + m]))

@lru_cache(maxsize=None)
def best(i, j, left):
    if left == 0:
        return 0
    if n - i < left or m - j < left:
        return float("-inf")
    return max(best(i + 1, j, left), best(i, j + 1, left), a[i] * b[j] + best(i + 1, j + 1, left - 1))

print(int(best(0, 0, k)))
"""
Q4_GREEDY = """
import sys
data = sys.stdin.read().split()
n, m, k = int(data[0]), int(data[1]), int(data[2])
a = sorted(map(int, data[3:3 + n]), reverse=True)
b = sorted(map(int, data[3 + n:3 + n + m]), reverse=True)
print(sum(x * y for x, y in zip(a[:k], b[:k])))
"""
Q4_RECURSION_LIMIT = """
import sys
data = sys.stdin.read().split()
n, m, k = int(data[0]), int(data[1]), int(data[2])
a = list(map(int, data[3:3 + n]))
b = list(map(int, data[3 + n:3 + n + m]))
print(a[n] * b[m])
"""

NO_CODE = "The answer follows from a prefix-sum argument, so I will not write code for it."
ONLY_PSEUDO = "Approach:\n1. read input\n2. scan once\n3. print the count\nComplexity O(n)."


def draft_then_final(draft, final):
    return (
        "First attempt:\n\n" + fence(draft) + "\n\nThat draft is wrong on ties; corrected version:\n\n" + fence(final)
    )


GROUPS = {
    "lc488_q1": [
        "Suffix sums from the right.\n\n" + fence(ref("lc488_q1")),
        "Straightforward version.\n\n" + fence(Q1_BRUTE),
        draft_then_final(Q1_GE, ref("lc488_q1")),
        fence(Q1_GE),
        fence(Q1_FLOAT_AVG_ALL),
        fence(Q1_CRASH),
        NO_CODE,
        "Final solution:\n\n" + fence("print(0)"),
    ],
    "lc488_q2": [
        fence(ref("lc488_q2")),
        "Repeat until stable:\n\n" + fence(Q2_QUADRATIC),
        fence(Q2_ONE_PASS),
        fence(Q2_BRACKETS),
        "A C++ stack:\n\n" + fence(Q2_CPP, "cpp"),
        ONLY_PSEUDO,
        draft_then_final(Q2_ONE_PASS, ref("lc488_q2")),
        fence("import sys\nprint(sys.stdin.read().split()[1:])"),
    ],
    "lc488_q3": [
        fence(ref("lc488_q3")),
        fence(Q3_BRUTE),
        fence(Q3_IGNORE_LENGTH),
        fence(Q3_SYNTAX),
        NO_CODE,
        draft_then_final(Q3_IGNORE_LENGTH, Q3_BRUTE),
        fence(ref("lc488_q3")),
        fence("print(1)"),
    ],
    "lc488_q4": [
        fence(ref("lc488_q4")),
        fence(Q4_BRUTE),
        fence(Q4_GREEDY),
        fence(Q4_RECURSION_LIMIT),
        ONLY_PSEUDO,
        draft_then_final(Q4_GREEDY, Q4_BRUTE),
        fence(Q4_GREEDY),
        fence(ref("lc488_q4")),
    ],
}


def main():
    lines = []
    for pid, responses in GROUPS.items():
        for i, resp in enumerate(responses):
            lines.append(json.dumps({"problem_id": pid, "rollout_index": i, "response": resp}, sort_keys=True))
    (HERE / "appendix_b" / "rollouts.jsonl").write_text("\n".join(lines) + "\n")
    print(f"{len(lines)} rollouts")


if __name__ == "__main__":
    main()
