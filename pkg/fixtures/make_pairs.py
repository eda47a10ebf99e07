"""Write fixtures/pairs/toy.jsonl: labeled preference pairs for pairwise training.

Preferred answers stay on topic and are structured; rejected ones repeat
themselves or drift.  Slots alternate so position carries no signal.
"""

import json
import random
from pathlib import Path

TOPICS = [
    ("How do I reverse a linked list in place?", "pointer prev next node iterate list reverse"),
    ("Why is my binary search off by one?", "binary search bounds mid low high inclusive"),
    ("Explain prefix sums for range queries.", "prefix sums range query array cumulative"),
    ("When should I use a heap instead of sorting?", "heap priority queue sorting top k elements"),
    ("How does memoization speed up recursion?", "memoization cache recursion subproblem overlapping"),
    ("What is a monotonic stack good for?", "monotonic stack next greater element pop push"),
    ("How can I detect a cycle in a directed graph?", "cycle directed graph dfs colors visiting stack"),
    ("Why use two pointers on a sorted array?", "two pointers sorted array left right sum"),
]

FILLER = ["honestly", "basically", "stuff", "things", "whatever", "really", "kind", "of"]


def good(rng, question, keywords):
    kws = keywords.split()
    rng.shuffle(kws)
    steps = [f"{i + 1}. Use the {kws[i]} and {kws[i + 1]} idea." for i in range(3)]
    return f"For {question.lower()[:-1]}:\n" + "\n".join(steps) + f"\nThis keeps the {kws[-1]} logic simple."


def bad(rng, question, keywords):
    if rng.random() < 0.5:
        phrase = " ".join(rng.choice(FILLER) for _ in range(4))
        return " ".join([phrase] * rng.randint(4, 7))
    return "I think " + " ".join(rng.choice(FILLER) for _ in range(rng.randint(20, 40))) + "."


def main():
    rng = random.Random(20)
    lines = []
    for rep in range(3):
        for question, kws in TOPICS:
            g, b = good(rng, question, kws), bad(rng, question, kws)
            if (rep + len(lines)) % 2 == 0:
                rec = {"context": question, "response_a": g, "response_b": b, "outcome": "a_wins"}
            else:
                rec = {"context": question, "response_a": b, "response_b": g, "outcome": "b_wins"}
            lines.append(json.dumps(rec, sort_keys=True))
    lines.append(json.dumps({"context": TOPICS[0][0], "response_a": "same", "response_b": "same", "outcome": "tie"}))
    out = Path(__file__).resolve().parent / "pairs" / "toy.jsonl"
    out.write_text("\n".join(lines) + "\n")
    print(f"{len(lines)} pairs -> {out}")


if __name__ == "__main__":
    main()
