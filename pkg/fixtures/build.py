"""Regenerate the fixture bundles' test files, problem.json and manifests.

Every expected output is computed here by a brute-force oracle that shares
no code with the programs under test.  Run from the repository root:

    python fixtures/build.py
"""

from __future__ import annotations

import heapq
import itertools
import json
import random
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent
# Fast linear Python scans need inputs this large before their growth clears
# start-up and import costs.
LINEAR_SCHEDULE = [2**e for e in range(12, 20)]
# Telling n from n log n needs more octaves above the fixed cost.
SEPARATION_SCHEDULE = [2**e for e in range(12, 22)]
# Generated inputs at 2^21 run past the default 8 MiB output cap.
LARGE_INPUT_LIMITS = {"output_cap": 64 * 2**20, "memory_cap": 1024 * 2**20}


# ---------------------------------------------------------------------------
# oracles


def dominant_indices(nums):
    count = 0
    for i in range(len(nums) - 1):
        rest = nums[i + 1 :]
        if nums[i] > Fraction(sum(rest), len(rest)):
            count += 1
    return count


def merge_adjacent(nums):
    arr = list(nums)
    while True:
        for i in range(len(arr) - 1):
            if arr[i] == arr[i + 1]:
                arr[i : i + 2] = [arr[i] * 2]
                break
        else:
            return arr


def count_cost_subarrays(nums, k):
    total = 0
    for l in range(len(nums)):
        for r in range(l, len(nums)):
            window = nums[l : r + 1]
            if (max(window) - min(window)) * len(window) <= k:
                total += 1
    return total


def max_k_pairs(a, b, k):
    if k == 0 or k > len(a) or k > len(b):
        return 0
    best = None
    for ia in itertools.combinations(range(len(a)), k):
        for jb in itertools.combinations(range(len(b)), k):
            s = sum(a[i] * b[j] for i, j in zip(ia, jb))
            best = s if best is None else max(best, s)
    return best


def kagamimochi(sizes):
    # Maximum matching by exhaustive search over (top, bottom) pairs.
    n = len(sizes)

    def go(used):
        best = 0
        free = [i for i in range(n) if not used >> i & 1]
        if len(free) < 2:
            return 0
        first = free[0]
        best = go(used | 1 << first)  # leave `first` unpaired
        for j in free[1:]:
            a, b = sorted((sizes[first], sizes[j]))
            if 2 * a <= b:
                best = max(best, 1 + go(used | 1 << first | 1 << j))
        return best

    return go(0)


def twice_subsequence(a, b):
    # Count embeddings of b in a, capped at 2.
    ways = [1] + [0] * len(b)
    for x in a:
        for j in range(len(b), 0, -1):
            if b[j - 1] == x:
                ways[j] = min(2, ways[j] + ways[j - 1])
    return "Yes" if ways[len(b)] >= 2 else "No"


def min_cost_sort(perm):
    start, goal = tuple(perm), tuple(sorted(perm))
    dist = {start: 0}
    heap = [(0, start)]
    while heap:
        d, p = heapq.heappop(heap)
        if p == goal:
            return d
        if d > dist[p]:
            continue
        for i in range(len(p) - 1):
            q = list(p)
            q[i], q[i + 1] = q[i + 1], q[i]
            q = tuple(q)
            nd = d + i + 1
            if nd < dist.get(q, 1 << 60):
                dist[q] = nd
                heapq.heappush(heap, (nd, q))
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# case builders: each returns (input text, expected output text)


def q1_case(nums):
    return f"{len(nums)}\n{' '.join(map(str, nums))}\n", f"{dominant_indices(nums)}\n"


def q2_case(nums):
    return f"{len(nums)}\n{' '.join(map(str, nums))}\n", " ".join(map(str, merge_adjacent(nums))) + "\n"


def q3_case(nums, k):
    return f"{len(nums)} {k}\n{' '.join(map(str, nums))}\n", f"{count_cost_subarrays(nums, k)}\n"


def q4_case(a, b, k):
    return (
        f"{len(a)} {len(b)} {k}\n{' '.join(map(str, a))}\n{' '.join(map(str, b))}\n",
        f"{max_k_pairs(a, b, k)}\n",
    )


def c1_case(sizes):
    sizes = sorted(sizes)
    return f"{len(sizes)}\n{' '.join(map(str, sizes))}\n", f"{kagamimochi(sizes)}\n"


def c2_case(a, b):
    return (
        f"{len(a)} {len(b)}\n{' '.join(map(str, a))}\n{' '.join(map(str, b))}\n",
        twice_subsequence(a, b) + "\n",
    )


def c3_case(perm):
    return f"{len(perm)}\n{' '.join(map(str, perm))}\n", f"{min_cost_sort(perm)}\n"


def appendix_b_tests(rng):
    q1 = [q1_case([5, 1, 1]), q1_case([1]), q1_case([3, 3, 3, 3]), q1_case([1, 2, 3, 4, 10])]
    q1 += [q1_case([rng.randint(1, 50) for _ in range(rng.randint(2, 40))]) for _ in range(4)]
    q2 = [q2_case([2, 1, 1, 3]), q2_case([1, 1, 2, 4]), q2_case([7]), q2_case([3, 1, 2])]
    q2 += [q2_case([rng.choice((1, 1, 2, 4)) for _ in range(rng.randint(1, 30))]) for _ in range(4)]
    q3 = [q3_case([1, 3, 2], 4), q3_case([5, 5, 5, 5], 0), q3_case([1, 10], 5)]
    q3 += [q3_case([rng.randint(1, 20) for _ in range(rng.randint(1, 25))], rng.randint(0, 60)) for _ in range(5)]
    q4 = [q4_case([1, 3, 2], [4, 5, 1], 2), q4_case([-2, 0, 5], [-3, 4, -5], 2), q4_case([1, 2], [3], 1)]
    q4 += [
        q4_case([rng.randint(-9, 9) for _ in range(n)], [rng.randint(-9, 9) for _ in range(m)], rng.randint(1, min(n, m)))
        for n, m in ((5, 6), (6, 4), (7, 7))
    ]
    return {"lc488_q1": q1, "lc488_q2": q2, "lc488_q3": q3, "lc488_q4": q4}


def appendix_c_tests(rng):
    c1 = [c1_case([2, 3, 4, 4, 7, 10]), c1_case([387, 388]), c1_case([1, 2, 3, 4, 5, 6, 7, 8])]
    c1 += [c1_case([rng.randint(1, 30) for _ in range(rng.randint(1, 12))]) for _ in range(5)]
    c2 = [
        c2_case([1, 2, 1, 2], [1, 2]),
        c2_case([1, 2, 1], [1, 2]),
        c2_case([1, 2, 3, 4], [1, 3]),
        c2_case([1, 1, 1], [1, 1, 1]),
    ]
    for _ in range(6):
        n = rng.randint(1, 14)
        a = [rng.randint(1, 3) for _ in range(n)]
        m = rng.randint(1, n)
        c2.append(c2_case(a, [rng.randint(1, 3) for _ in range(m)] if rng.random() < 0.3 else rng.sample(a, m)))
    c3 = [c3_case([3, 2, 1]), c3_case([1, 2, 3, 4]), c3_case([2, 1]), c3_case([5, 4, 3, 2, 1])]
    for _ in range(4):
        perm = list(range(1, rng.randint(2, 7) + 1))
        rng.shuffle(perm)
        c3.append(c3_case(perm))
    return {"abc388_c": c1, "arc195_a": c2, "arc194_b": c3}


# ---------------------------------------------------------------------------

STATEMENTS = {
    "lc488_q1": "Count Dominant Indices\n\nGiven an integer array nums, index i is dominant when nums[i] is strictly "
    "greater than the average of nums[i+1..n-1]. The last index is never dominant. Count the dominant indices.\n\n"
    "Input: n, then n integers. Output: the count.\n",
    "lc488_q2": "Apply Operations to Maximize Array Sum\n\nWhile two adjacent elements are equal, replace the leftmost "
    "such pair by its sum. Print the final array.\n\nInput: n, then n integers. Output: the final array, "
    "space separated.\n",
    "lc488_q3": "Count Subarrays with Cost Constraint\n\nThe cost of nums[l..r] is (max - min) * (r - l + 1). Count the "
    "subarrays whose cost is at most k.\n\nInput: n k, then n integers. Output: the count.\n",
    "lc488_q4": "Maximize Score of K Pairs\n\nChoose k index pairs (i_1, j_1) .. (i_k, j_k), strictly increasing in both "
    "coordinates, maximizing the sum of nums1[i] * nums2[j].\n\nInput: n m k, then nums1, then nums2. Output: the "
    "maximum score.\n",
    "abc388_c": "Simultaneous Kagamimochi\n\nN mochi with non-decreasing sizes. A mochi of size a can sit on one of size "
    "b iff a <= b / 2. Maximize the number K of stacks built at the same time from 2K distinct mochi.\n\n"
    "Input: N, then A_1..A_N. Output: K.\n",
    "arc195_a": "Twice Subsequence\n\nGiven A (length N) and B (length M <= N), decide whether at least two different "
    "position sets of A spell B as a subsequence.\n\nInput: N M, then A, then B. Output: Yes or No.\n",
    "arc194_b": "Minimum Cost Sort\n\nP is a permutation of 1..N. Swapping P_i and P_(i+1) costs i. Print the minimum "
    "total cost to sort P ascending.\n\nInput: N, then P_1..P_N. Output: the minimum cost.\n",
}

PROBLEMS = {
    "appendix_b": {
        "lc488_q1": {"label": "O(n)", "reference": "reference.py", "schedule": LINEAR_SCHEDULE},
        "lc488_q2": {"label": "O(n)", "reference": "reference.py", "schedule": LINEAR_SCHEDULE},
        "lc488_q3": {"label": "O(n)", "reference": "reference.py", "schedule": LINEAR_SCHEDULE},
        "lc488_q4": {
            "label": "O(n^2)",
            "reference": "reference.py",
            "schedule": [2**e for e in range(5, 11)],
        },
    },
    "appendix_c": {
        "abc388_c": {
            "label": "O(n)",
            "reference": "candidates/after.py",
            "schedule": SEPARATION_SCHEDULE,
            "limits": LARGE_INPUT_LIMITS,
        },
        "arc195_a": {
            "label": "O(n)",
            "reference": "candidates/after.py",
            "schedule": SEPARATION_SCHEDULE,
            "limits": LARGE_INPUT_LIMITS,
        },
        "arc194_b": {
            "label": "O(n log n)",
            "reference": "candidates/after.py",
            "schedule": [2**e for e in range(7, 20)],
        },
    },
}


def write_bundle(name: str, tests: dict) -> None:
    root = HERE / name
    for pid, spec in PROBLEMS[name].items():
        d = root / pid
        (d / "tests").mkdir(parents=True, exist_ok=True)
        for old in (d / "tests").glob("*"):
            old.unlink()
        (d / "statement.md").write_text(STATEMENTS[pid], encoding="utf-8")
        entries = []
        for i, (inp, out) in enumerate(tests[pid], 1):
            (d / "tests" / f"{i:02d}.in").write_text(inp, encoding="utf-8")
            (d / "tests" / f"{i:02d}.out").write_text(out, encoding="utf-8")
            entries.append({"input": f"tests/{i:02d}.in", "output": f"tests/{i:02d}.out", "compare_mode": "trimmed"})
        doc = {
            "id": pid,
            "statement": "statement.md",
            "optimal_complexity": spec["label"],
            "reference_solution": {"language": "python", "path": spec["reference"]},
            "input_generator": {"language": "python", "path": "generator.py"},
            "tests": entries,
        }
        if "schedule" in spec:
            doc["size_schedule"] = spec["schedule"]
        if "limits" in spec:
            doc["limits"] = spec["limits"]
        (d / "problem.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    manifest = {"format": "gatejudge-bundle/1", "problems": sorted(PROBLEMS[name])}
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def main() -> None:
    rng = random.Random(388)
    write_bundle("appendix_b", appendix_b_tests(rng))
    write_bundle("appendix_c", appendix_c_tests(rng))


if __name__ == "__main__":
    main()
