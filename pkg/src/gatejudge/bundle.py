"""Problem/rollout data model, bundle loading and code extraction.

A bundle is a directory holding ``manifest.json`` plus one subdirectory per
problem::

    bundle/
      manifest.json            {"format": "gatejudge-bundle/1", "problems": ["abc388_c", ...]}
      abc388_c/
        problem.json
        statement.md
        reference.py
        generator.py
        tests/01.in, tests/01.out, ...

``problem.json`` names the files for the statement, reference solution,
input generator and tests; everything else in the directory is ignored.
"""

from __future__ import annotations

import enum
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .lattice import ComplexityClass
from .errors import DuplicateId, MissingManifest, SchemaViolation, UnknownComplexityLabel

BUNDLE_FORMAT = "gatejudge-bundle/1"
MANIFEST_NAME = "manifest.json"
PROBLEM_FILE = "problem.json"

MIB = 1024 * 1024


class CompareMode(str, enum.Enum):
    EXACT = "exact"
    TRIMMED = "trimmed"
    TOKEN = "token"


@dataclass(frozen=True)
class SourceProgram:
    language_tag: str
    source: str

    def __post_init__(self):
        if not self.source.strip():
            raise ValueError("source program must be nonempty")


@dataclass(frozen=True)
class TestCase:
    input: bytes
    expected_output: bytes
    compare_mode: CompareMode = CompareMode.TRIMMED

    __test__ = False  # keep pytest from collecting this class

    def __post_init__(self):
        if not self.expected_output and self.compare_mode is not CompareMode.EXACT:
            raise ValueError("empty expected output is only allowed under exact comparison")


def _env_number(name: str, default: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw else default


@dataclass(frozen=True)
class ResourceLimits:
    wall_timeout: float = 10.0
    cpu_timeout: float = 10.0
    memory_cap: int = 512 * MIB
    output_cap: int = 8 * MIB

    def __post_init__(self):
        if min(self.wall_timeout, self.cpu_timeout, self.memory_cap, self.output_cap) <= 0:
            raise ValueError("resource limits must be strictly positive")
        if self.cpu_timeout > self.wall_timeout:
            raise ValueError("cpu_timeout must not exceed wall_timeout")

    @classmethod
    def from_env(cls) -> "ResourceLimits":
        """Defaults, overridden by ``GATEJUDGE_{WALL_TIMEOUT,CPU_TIMEOUT,MEMORY_CAP,OUTPUT_CAP}``."""
        base = cls()
        return cls(
            wall_timeout=_env_number("GATEJUDGE_WALL_TIMEOUT", base.wall_timeout),
            cpu_timeout=_env_number("GATEJUDGE_CPU_TIMEOUT", base.cpu_timeout),
            memory_cap=int(_env_number("GATEJUDGE_MEMORY_CAP", base.memory_cap)),
            output_cap=int(_env_number("GATEJUDGE_OUTPUT_CAP", base.output_cap)),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "wall_timeout": self.wall_timeout,
            "cpu_timeout": self.cpu_timeout,
            "memory_cap": self.memory_cap,
            "output_cap": self.output_cap,
        }


@dataclass(frozen=True)
class Problem:
    id: str
    statement: str
    tests: tuple[TestCase, ...]
    reference_solution: SourceProgram
    optimal_complexity: ComplexityClass
    input_generator: SourceProgram
    limits: ResourceLimits = field(default_factory=ResourceLimits)
    # Optional per-problem override of the estimator's size schedule.
    size_schedule: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Rollout:
    problem_id: str
    rollout_index: int
    raw_response: str
    extracted_program: SourceProgram | None = None


# ---------------------------------------------------------------------------
# loading


def _read_json(path: Path, problem_id: str, field_name: str) -> dict[str, Any]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SchemaViolation(problem_id, field_name, f"missing {path.name}") from None
    except json.JSONDecodeError as exc:
        raise SchemaViolation(problem_id, field_name, f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SchemaViolation(problem_id, field_name, "expected a JSON object")
    return data


def _read_text(root: Path, rel: Any, problem_id: str, field_name: str) -> str:
    return _read_bytes(root, rel, problem_id, field_name).decode("utf-8")


def _read_bytes(root: Path, rel: Any, problem_id: str, field_name: str) -> bytes:
    if not isinstance(rel, str) or not rel:
        raise SchemaViolation(problem_id, field_name, "expected a relative file path")
    path = (root / rel).resolve()
    if root.resolve() not in path.parents:
        raise SchemaViolation(problem_id, field_name, "path escapes the problem directory")
    try:
        return path.read_bytes()
    except (FileNotFoundError, IsADirectoryError):
        raise SchemaViolation(problem_id, field_name, f"missing file {rel}") from None


def _program(root: Path, spec: Any, problem_id: str, field_name: str) -> SourceProgram:
    if not isinstance(spec, dict):
        raise SchemaViolation(problem_id, field_name, "missing program entry")
    lang = spec.get("language")
    if not isinstance(lang, str) or not lang:
        raise SchemaViolation(problem_id, field_name, "missing language")
    source = _read_text(root, spec.get("path"), problem_id, field_name)
    try:
        return SourceProgram(lang, source)
    except ValueError as exc:
        raise SchemaViolation(problem_id, field_name, str(exc)) from None


def _limits(raw: Any, problem_id: str) -> ResourceLimits:
    base = ResourceLimits.from_env()
    if raw is None:
        return base
    if not isinstance(raw, dict) or set(raw) - set(base.to_dict()):
        raise SchemaViolation(problem_id, "limits", "unexpected keys")
    merged = {**base.to_dict(), **raw}
    try:
        return ResourceLimits(
            wall_timeout=float(merged["wall_timeout"]),
            cpu_timeout=float(merged["cpu_timeout"]),
            memory_cap=int(merged["memory_cap"]),
            output_cap=int(merged["output_cap"]),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaViolation(problem_id, "limits", str(exc)) from None


def load_problem(root: Path, fallback_id: str) -> Problem:
    data = _read_json(root / PROBLEM_FILE, fallback_id, PROBLEM_FILE)
    pid = data.get("id")
    if not isinstance(pid, str) or not pid:
        raise SchemaViolation(fallback_id, "id", "must be a nonempty string")

    label = data.get("optimal_complexity")
    if not isinstance(label, str):
        raise SchemaViolation(pid, "optimal_complexity", "missing")
    try:
        optimal = ComplexityClass.from_token(label)
    except ValueError:
        raise UnknownComplexityLabel(pid, label) from None

    raw_tests = data.get("tests")
    if not isinstance(raw_tests, list) or not raw_tests:
        raise SchemaViolation(pid, "tests", "at least one test is required")
    tests = []
    for i, t in enumerate(raw_tests):
        if not isinstance(t, dict):
            raise SchemaViolation(pid, f"tests[{i}]", "expected an object")
        try:
            mode = CompareMode(t.get("compare_mode", CompareMode.TRIMMED.value))
            tests.append(
                TestCase(
                    _read_bytes(root, t.get("input"), pid, f"tests[{i}].input"),
                    _read_bytes(root, t.get("output"), pid, f"tests[{i}].output"),
                    mode,
                )
            )
        except ValueError as exc:
            raise SchemaViolation(pid, f"tests[{i}]", str(exc)) from None

    schedule = data.get("size_schedule")
    if schedule is not None:
        ok = (
            isinstance(schedule, list)
            and all(isinstance(s, int) and s >= 1 for s in schedule)
            and all(a < b for a, b in zip(schedule, schedule[1:]))
        )
        if not ok:
            raise SchemaViolation(pid, "size_schedule", "must be strictly increasing positive ints")
        schedule = tuple(schedule)

    return Problem(
        id=pid,
        statement=_read_text(root, data.get("statement"), pid, "statement"),
        tests=tuple(tests),
        reference_solution=_program(root, data.get("reference_solution"), pid, "reference_solution"),
        optimal_complexity=optimal,
        input_generator=_program(root, data.get("input_generator"), pid, "input_generator"),
        limits=_limits(data.get("limits"), pid),
        size_schedule=schedule,
    )


def load_bundle(path: str | os.PathLike) -> list[Problem]:
    """Load and validate every problem of a bundle, sorted by id.

    Any malformed problem rejects the whole bundle.
    """
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingManifest(root)
    manifest = _read_json(manifest_path, "<manifest>", MANIFEST_NAME)
    if manifest.get("format") != BUNDLE_FORMAT:
        raise SchemaViolation("<manifest>", "format", f"expected {BUNDLE_FORMAT!r}")
    entries = manifest.get("problems")
    if not isinstance(entries, list) or not all(isinstance(e, str) and e for e in entries):
        raise SchemaViolation("<manifest>", "problems", "expected a list of directory names")

    problems: dict[str, Problem] = {}
    for entry in entries:
        problem = load_problem(root / entry, entry)
        if problem.id in problems:
            raise DuplicateId(problem.id)
        problems[problem.id] = problem
    return [problems[k] for k in sorted(problems)]


def problem_index(problems: list[Problem]) -> dict[str, Problem]:
    return {p.id: p for p in problems}


# ---------------------------------------------------------------------------
# canonical serialization


_SUFFIX = {"python": ".py", "cpp": ".cpp", "c": ".c"}


def dump_bundle(problems: list[Problem], path: str | os.PathLike) -> None:
    """Write problems in canonical bundle form; ``load_bundle`` inverts this."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    ids = sorted(p.id for p in problems)
    (root / MANIFEST_NAME).write_text(
        json.dumps({"format": BUNDLE_FORMAT, "problems": ids}, indent=2) + "\n", encoding="utf-8"
    )
    for p in problems:
        d = root / p.id
        (d / "tests").mkdir(parents=True, exist_ok=True)
        (d / "statement.md").write_text(p.statement, encoding="utf-8")
        ref = "reference" + _SUFFIX.get(p.reference_solution.language_tag, ".src")
        gen = "generator" + _SUFFIX.get(p.input_generator.language_tag, ".src")
        (d / ref).write_text(p.reference_solution.source, encoding="utf-8")
        (d / gen).write_text(p.input_generator.source, encoding="utf-8")
        tests = []
        for i, t in enumerate(p.tests, 1):
            (d / "tests" / f"{i:02d}.in").write_bytes(t.input)
            (d / "tests" / f"{i:02d}.out").write_bytes(t.expected_output)
            tests.append(
                {"input": f"tests/{i:02d}.in", "output": f"tests/{i:02d}.out", "compare_mode": t.compare_mode.value}
            )
        doc: dict[str, Any] = {
            "id": p.id,
            "statement": "statement.md",
            "optimal_complexity": p.optimal_complexity.token,
            "reference_solution": {"language": p.reference_solution.language_tag, "path": ref},
            "input_generator": {"language": p.input_generator.language_tag, "path": gen},
            "limits": p.limits.to_dict(),
            "tests": tests,
        }
        if p.size_schedule is not None:
            doc["size_schedule"] = list(p.size_schedule)
        (d / PROBLEM_FILE).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# code extraction

_FENCE = re.compile(
    r"^[ \t]*(?P<fence>`{3,}|~{3,})[ \t]*(?P<info>[^\n`]*)\n(?P<body>.*?)^[ \t]*(?P=fence)[ \t]*$",
    re.MULTILINE | re.DOTALL,
)

LANGUAGE_ALIASES = {
    "py": "python",
    "py3": "python",
    "python3": "python",
    "c++": "cpp",
    "cc": "cpp",
    "cxx": "cpp",
    "h": "c",
}


def normalize_language(tag: str) -> str:
    tag = tag.strip().lower()
    return LANGUAGE_ALIASES.get(tag, tag)


def extract_program(raw_response: str, language_hints: list[str] | tuple[str, ...] = ()) -> SourceProgram | None:
    """Return the last fenced code block in a model response.

    Blocks tagged with one of ``language_hints`` take precedence; otherwise
    the last block of any language is used.  Untagged blocks inherit the
    first hint.  Empty blocks are ignored, so the result is never empty.
    """
    hints = [normalize_language(h) for h in language_hints]
    blocks = []
    for m in _FENCE.finditer(raw_response):
        body = m.group("body")
        if not body.strip():
            continue
        info = m.group("info").split()
        lang = normalize_language(info[0]) if info else ""
        blocks.append((lang, body))
    if not blocks:
        return None
    hinted = [b for b in blocks if b[0] in hints]
    lang, body = (hinted or blocks)[-1]
    if not lang:
        lang = hints[0] if hints else "python"
    return SourceProgram(lang, body)
