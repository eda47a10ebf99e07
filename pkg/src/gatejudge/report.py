"""Per-rollout report rows and aggregates, rebuilt from a record store."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .complexity import ComplexityVerdict
from .grouprl import FilterDecision
from .lattice import ComplexityClass
from .records import JudgeResult, Record
from .reward import RewardBreakdown
from .sandbox import ExecutionResult, Status


@dataclass
class ReportRow:
    problem_id: str
    rollout_index: int
    passed_count: int = 0
    total_count: int = 0
    reward: RewardBreakdown | None = None
    verdict: ComplexityVerdict | None = None
    kept: bool | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "problem_id": self.problem_id,
            "rollout_index": self.rollout_index,
            "pass_rate": [self.passed_count, self.total_count],
            "reward": self.reward.to_dict() if self.reward else None,
            "complexity": None
            if self.verdict is None
            else {
                "estimated": self.verdict.estimated.token,
                "relation": self.verdict.relation.value if self.verdict.relation else None,
                "steps": self.verdict.steps,
            },
            "problem_kept": self.kept,
        }


@dataclass
class Report:
    rows: list[ReportRow] = field(default_factory=list)
    timeouts: int = 0
    truncations: int = 0

    @classmethod
    def from_records(cls, records: list[Record]) -> "Report":
        rows: dict[tuple[str, int], ReportRow] = {}
        decisions: dict[str, FilterDecision] = {}
        report = cls()

        def row(ref) -> ReportRow:
            key = (ref["problem_id"], ref["rollout_index"])
            if key not in rows:
                rows[key] = ReportRow(*key)
            return rows[key]

        for rec in records:
            v = rec.value
            if isinstance(v, ExecutionResult):
                report.timeouts += v.status is Status.TIMEOUT
                report.truncations += v.status is Status.OUTPUT_TRUNCATED
            elif isinstance(v, JudgeResult):
                r = row(rec.ref)
                r.passed_count, r.total_count = v.pass_rate.passed_count, v.pass_rate.total_count
            elif isinstance(v, RewardBreakdown):
                row(rec.ref).reward = v
            elif isinstance(v, ComplexityVerdict) and "rollout_index" in rec.ref:
                row(rec.ref).verdict = v
            elif isinstance(v, FilterDecision):
                decisions[v.problem_id] = v
        for r in rows.values():
            if r.problem_id in decisions:
                r.kept = decisions[r.problem_id].kept
        report.rows = [rows[k] for k in sorted(rows)]
        return report

    def aggregates(self) -> dict[str, Any]:
        totals = [r.reward.total for r in self.rows if r.reward is not None]
        gates = [r.reward.gate_open for r in self.rows if r.reward is not None]
        hist = Counter(r.verdict.estimated for r in self.rows if r.verdict is not None)
        return {
            "rollouts": len(self.rows),
            "mean_reward": math.fsum(totals) / len(totals) if totals else 0.0,
            "gate_open_fraction": sum(gates) / len(gates) if gates else 0.0,
            "class_histogram": {c.token: hist[c] for c in ComplexityClass if hist[c]},
            "timeouts": self.timeouts,
            "truncations": self.truncations,
        }

    def to_json(self) -> str:
        doc = {"rows": [r.to_dict() for r in self.rows], "aggregates": self.aggregates()}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        head = f"{'problem':<14}{'#':>3}  {'pass':>7}  {'format':>6}  {'correct':>7}  {'time':>5}  {'total':>6}  {'class':<11}kept"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            rw = r.reward
            t = "-" if rw is None or rw.r_time is None else f"{rw.r_time:.2f}"
            cls = r.verdict.estimated.token if r.verdict else "-"
            kept = "-" if r.kept is None else ("yes" if r.kept else "no")
            lines.append(
                f"{r.problem_id:<14}{r.rollout_index:>3}  {f'{r.passed_count}/{r.total_count}':>7}  "
                f"{rw.r_format if rw else 0:>6.2f}  {rw.r_correctness if rw else 0:>7.3f}  {t:>5}  "
                f"{rw.total if rw else 0:>6.3f}  {cls:<11}{kept}"
            )
        agg = self.aggregates()
        lines.append("")
        lines.append(
            f"mean reward {agg['mean_reward']:.4f}   gate open {agg['gate_open_fraction']:.3f}   "
            f"timeouts {agg['timeouts']}   truncations {agg['truncations']}"
        )
        if agg["class_histogram"]:
            lines.append("classes: " + ", ".join(f"{k}={v}" for k, v in agg["class_histogram"].items()))
        return "\n".join(lines) + "\n"
