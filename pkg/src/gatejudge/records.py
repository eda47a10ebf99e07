"""Append-only record store.

A store is a line-delimited JSON file.  The first line is a header carrying
the format version and run id; each following line is one record::

    {"format": "gatejudge-records/1", "run_id": "..."}
    {"data": {...}, "id": 1, "kind": "RunManifest", "ref": {}, "run_id": "..."}

Measured quantities (wall/CPU time, memory, stderr, fit residuals) vary
from run to run, so they are written to a sidecar file
``<store>.measurements.jsonl`` keyed by record id.  The main file then only
holds values that are reproducible from the inputs, and :func:`replay`
joins both back together.
"""

from __future__ import annotations

import base64
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator

from .complexity import ComplexityVerdict, Relation
from .correctness import FailureKind, PassRate, TestVerdict
from .errors import SerializationFailure, StoreClosed
from .grouprl import AdvantageSet, Criterion, FilterDecision
from .lattice import ComplexityClass
from .reward import RewardBreakdown
from .sandbox import ExecutionResult, Status

STORE_FORMAT = "gatejudge-records/1"
SIDECAR_SUFFIX = ".measurements.jsonl"


@dataclass(frozen=True)
class RunManifest:
    run_id: str
    command: str
    config_snapshot: dict[str, Any]
    engine_version: str
    started_at: str


@dataclass(frozen=True)
class RunSummary:
    run_id: str
    finished_at: str
    exit_status: str  # success | partial | failed


@dataclass(frozen=True)
class JudgeResult:
    verdicts: tuple[TestVerdict, ...]
    pass_rate: PassRate
    compile_ok: bool
    extracted: bool = True


@dataclass(frozen=True)
class Record:
    id: int
    run_id: str
    kind: str
    ref: dict[str, Any]
    value: Any


# ---------------------------------------------------------------------------
# codecs: each returns (stable fields, measured fields)


def _enc_bytes(b: bytes) -> Any:
    try:
        return b.decode("utf-8")
    except UnicodeDecodeError:
        return {"base64": base64.b64encode(b).decode("ascii")}


def _dec_bytes(v: Any) -> bytes:
    if isinstance(v, dict):
        return base64.b64decode(v["base64"])
    return v.encode("utf-8")


def _encode(obj: Any) -> tuple[str, dict, dict]:
    if isinstance(obj, ExecutionResult):
        return (
            "ExecutionResult",
            {"status": obj.status.value, "stdout": _enc_bytes(obj.stdout), "exit_code": obj.exit_code},
            {
                "stderr": _enc_bytes(obj.stderr),
                "wall_time": obj.wall_time,
                "cpu_time": obj.cpu_time,
                "peak_memory": obj.peak_memory,
            },
        )
    if isinstance(obj, RewardBreakdown):
        return "RewardBreakdown", obj.to_dict(), {}
    if isinstance(obj, FilterDecision):
        return (
            "FilterDecision",
            {
                "problem_id": obj.problem_id,
                "k": obj.k,
                "n": obj.n,
                "kept": obj.kept,
                "criterion": obj.criterion.value,
                "band": list(obj.band),
            },
            {},
        )
    if isinstance(obj, AdvantageSet):
        return (
            "AdvantageSet",
            {
                "problem_id": obj.problem_id,
                "advantages": list(obj.advantages),
                "group_mean": obj.group_mean,
                "group_std": obj.group_std,
            },
            {},
        )
    if isinstance(obj, ComplexityVerdict):
        return (
            "ComplexityVerdict",
            {
                "estimated": obj.estimated.token,
                "relation": obj.relation.value if obj.relation else None,
                "steps": obj.steps,
                "source": obj.source,
            },
            {"residuals": {c.token: r for c, r in obj.residuals.items()}, "confident": obj.confident},
        )
    if isinstance(obj, JudgeResult):
        return (
            "JudgeResult",
            {
                "verdicts": [
                    [v.test_index, v.passed, v.failure_kind.value if v.failure_kind else None] for v in obj.verdicts
                ],
                "passed_count": obj.pass_rate.passed_count,
                "total_count": obj.pass_rate.total_count,
                "compile_ok": obj.compile_ok,
                "extracted": obj.extracted,
            },
            {},
        )
    if isinstance(obj, RunManifest):
        return (
            "RunManifest",
            {
                "run_id": obj.run_id,
                "command": obj.command,
                "config_snapshot": obj.config_snapshot,
                "engine_version": obj.engine_version,
                "started_at": obj.started_at,
            },
            {},
        )
    if isinstance(obj, RunSummary):
        return (
            "RunSummary",
            {"run_id": obj.run_id, "finished_at": obj.finished_at, "exit_status": obj.exit_status},
            {},
        )
    raise SerializationFailure(f"cannot serialize {type(obj).__name__}")


def _decode(kind: str, d: dict, m: dict) -> Any:
    if kind == "ExecutionResult":
        return ExecutionResult(
            Status(d["status"]),
            _dec_bytes(d["stdout"]),
            _dec_bytes(m.get("stderr", "")),
            m.get("wall_time", 0.0),
            m.get("cpu_time", 0.0),
            m.get("peak_memory", 0),
            d["exit_code"],
        )
    if kind == "RewardBreakdown":
        return RewardBreakdown(d["r_format"], d["r_correctness"], d["r_time"], d["gate_open"], d["total"])
    if kind == "FilterDecision":
        return FilterDecision(d["problem_id"], d["k"], d["n"], d["kept"], Criterion(d["criterion"]), tuple(d["band"]))
    if kind == "AdvantageSet":
        return AdvantageSet(d["problem_id"], tuple(d["advantages"]), d["group_mean"], d["group_std"])
    if kind == "ComplexityVerdict":
        return ComplexityVerdict(
            ComplexityClass.from_token(d["estimated"]),
            {ComplexityClass.from_token(k): v for k, v in m.get("residuals", {}).items()},
            m.get("confident", False),
            Relation(d["relation"]) if d["relation"] else None,
            d["steps"],
            d["source"],
        )
    if kind == "JudgeResult":
        verdicts = tuple(TestVerdict(i, p, FailureKind(f) if f else None) for i, p, f in d["verdicts"])
        return JudgeResult(verdicts, PassRate(d["passed_count"], d["total_count"]), d["compile_ok"], d["extracted"])
    if kind == "RunManifest":
        return RunManifest(d["run_id"], d["command"], d["config_snapshot"], d["engine_version"], d["started_at"])
    if kind == "RunSummary":
        return RunSummary(d["run_id"], d["finished_at"], d["exit_status"])
    raise SerializationFailure(f"unknown record kind {kind!r}")


def _dumps(obj: Any) -> str:
    def default(o):
        if isinstance(o, Fraction):
            return [o.numerator, o.denominator]
        raise TypeError(type(o).__name__)

    try:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False, default=default)
    except (TypeError, ValueError) as exc:
        raise SerializationFailure(str(exc)) from exc


# ---------------------------------------------------------------------------


@dataclass
class RecordStore:
    """Single-writer append-only store.  Use :meth:`create` to open one."""

    path: Path
    run_id: str
    durable: bool = True
    _next_id: int = 1
    _fh: Any = field(default=None, repr=False)
    _side: Any = field(default=None, repr=False)

    @classmethod
    def create(cls, path: str | os.PathLike, run_id: str, durable: bool = True) -> "RecordStore":
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        store = cls(path, run_id, durable)
        store._fh = open(path, "w", encoding="utf-8", newline="\n")
        store._side = open(sidecar_path(path), "w", encoding="utf-8", newline="\n")
        store._write(store._fh, _dumps({"format": STORE_FORMAT, "run_id": run_id}))
        return store

    @property
    def closed(self) -> bool:
        return self._fh is None

    def append(self, record: Any, ref: dict[str, Any] | None = None) -> int:
        if self._fh is None:
            raise StoreClosed(f"store {self.path} is closed")
        kind, stable, measured = _encode(record)
        rid = self._next_id
        line = _dumps({"id": rid, "run_id": self.run_id, "kind": kind, "ref": ref or {}, "data": stable})
        side = _dumps({"id": rid, "data": measured}) if measured else None
        self._write(self._fh, line)
        if side is not None:
            self._write(self._side, side)
        self._next_id += 1
        return rid

    def _write(self, fh, line: str) -> None:
        fh.write(line + "\n")
        fh.flush()
        if self.durable:
            os.fsync(fh.fileno())

    def close(self) -> None:
        for fh in (self._fh, self._side):
            if fh is not None:
                fh.close()
        self._fh = self._side = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def append_record(store: RecordStore, record: Any, ref: dict[str, Any] | None = None) -> int:
    return store.append(record, ref)


def sidecar_path(path: str | os.PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + SIDECAR_SUFFIX)


def read_header(path: str | os.PathLike) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
    if header.get("format") != STORE_FORMAT:
        raise SerializationFailure(f"{path}: not a record store")
    return header


def iter_records(path: str | os.PathLike) -> Iterator[Record]:
    path = Path(path)
    read_header(path)
    measured: dict[int, dict] = {}
    side = sidecar_path(path)
    if side.exists():
        for line in side.read_text(encoding="utf-8").splitlines():
            if line:
                rec = json.loads(line)
                measured[rec["id"]] = rec["data"]
    with open(path, encoding="utf-8") as fh:
        fh.readline()
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            value = _decode(rec["kind"], rec["data"], measured.get(rec["id"], {}))
            yield Record(rec["id"], rec["run_id"], rec["kind"], rec["ref"], value)


def replay(path: str | os.PathLike) -> list[Record]:
    return list(iter_records(path))
