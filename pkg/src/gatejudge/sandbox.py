"""Process-level sandbox: compile and run programs under resource limits.

Isolation is a fresh working directory per run, closed inherited
descriptors, a new session (so the whole process group can be killed) and
POSIX rlimits for CPU time and address space.  It is meant for trusted
fixture code, not adversarial submissions.
"""

from __future__ import annotations

import builtins
import enum
import json
import math
import os
import resource
import shutil
import signal
import subprocess
import sys
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .bundle import ResourceLimits, SourceProgram, normalize_language
from .errors import CompilerTimeout, SpawnFailure, UnknownLanguage

PLACEHOLDERS = frozenset({"source", "exe", "input", "workdir"})

_CHUNK = 65536


class Status(str, enum.Enum):
    OK = "ok"
    COMPILE_ERROR = "compile_error"
    RUNTIME_ERROR = "runtime_error"
    TIMEOUT = "timeout"
    MEMORY_EXCEEDED = "memory_exceeded"
    OUTPUT_TRUNCATED = "output_truncated"


class WorkdirPolicy(str, enum.Enum):
    FRESH_TEMP = "fresh-temp"
    REUSE = "reuse"


@dataclass(frozen=True)
class RunnerSpec:
    language_tag: str
    run_command: tuple[str, ...]
    compile_command: tuple[str, ...] | None = None
    workdir_policy: WorkdirPolicy = WorkdirPolicy.FRESH_TEMP
    source_name: str = "main"
    compile_timeout: float = 60.0
    # Trivial program used to measure process start-up cost for timing.
    noop_source: str | None = None
    # Byte-compile the source in-process; a SyntaxError becomes a compile error.
    check_python_syntax: bool = False

    def __post_init__(self):
        if not self.run_command:
            raise ValueError(f"runner {self.language_tag!r}: run_command is empty")
        for template in (self.run_command, self.compile_command or ()):
            for part in template:
                for name in _placeholders(part):
                    if name not in PLACEHOLDERS:
                        raise ValueError(f"runner {self.language_tag!r}: undeclared placeholder {{{name}}}")


def _placeholders(part: str) -> list[str]:
    import string

    return [name for _, name, _, _ in string.Formatter().parse(part) if name is not None]


def default_registry() -> dict[str, RunnerSpec]:
    # -S skips site-packages discovery, which dominates interpreter start-up.
    return {
        "python": RunnerSpec(
            "python",
            run_command=(sys.executable, "-I", "-S", "{source}"),
            check_python_syntax=True,
            source_name="main.py",
            noop_source="pass\n",
        ),
        "cpp": RunnerSpec(
            "cpp",
            compile_command=("g++", "-O2", "-std=c++17", "-o", "{exe}", "{source}"),
            run_command=("{exe}",),
            source_name="main.cpp",
            noop_source="int main() { return 0; }\n",
        ),
        "c": RunnerSpec(
            "c",
            compile_command=("gcc", "-O2", "-std=c11", "-o", "{exe}", "{source}", "-lm"),
            run_command=("{exe}",),
            source_name="main.c",
            noop_source="int main(void) { return 0; }\n",
        ),
    }


def load_registry(path: str | os.PathLike | None) -> dict[str, RunnerSpec]:
    """Default runners updated with entries from a JSON registry file.

    The file maps language tags to ``{"run": [...], "compile": [...] | null,
    "workdir_policy": ..., "source_name": ..., "noop_source": ...}``.
    """
    registry = default_registry()
    if path is None:
        return registry
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    for tag, entry in raw.items():
        tag = normalize_language(tag)
        compile_cmd = entry.get("compile")
        registry[tag] = RunnerSpec(
            tag,
            run_command=tuple(entry["run"]),
            compile_command=tuple(compile_cmd) if compile_cmd else None,
            workdir_policy=WorkdirPolicy(entry.get("workdir_policy", "fresh-temp")),
            source_name=entry.get("source_name", "main"),
            compile_timeout=float(entry.get("compile_timeout", 60.0)),
            noop_source=entry.get("noop_source"),
            check_python_syntax=bool(entry.get("check_python_syntax", False)),
        )
    return registry


def default_workers() -> int:
    raw = os.environ.get("GATEJUDGE_WORKERS")
    if raw:
        return max(1, int(raw))
    return max(1, min(4, os.cpu_count() or 1))


@dataclass(frozen=True)
class ExecutionResult:
    status: Status
    stdout: bytes
    stderr: bytes
    wall_time: float
    cpu_time: float
    peak_memory: int
    exit_code: int | None = None

    @property
    def ok(self) -> bool:
        return self.status is Status.OK


@dataclass(frozen=True)
class CompileError:
    diagnostics: str

    status = Status.COMPILE_ERROR


@dataclass
class Artifact:
    """Executable handle produced by :func:`compile`.

    Owns a private directory holding the source (and binary, if any); call
    :meth:`close` or use it as a context manager to remove it.
    """

    runner: RunnerSpec
    directory: Path
    source_path: Path
    exe_path: Path | None = None
    _closed: bool = field(default=False, repr=False)

    def close(self) -> None:
        if not self._closed:
            shutil.rmtree(self.directory, ignore_errors=True)
            self._closed = True

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def resolve_runner(language_tag: str, registry: dict[str, RunnerSpec] | None = None) -> RunnerSpec:
    registry = registry if registry is not None else default_registry()
    tag = normalize_language(language_tag)
    try:
        return registry[tag]
    except KeyError:
        raise UnknownLanguage(language_tag) from None


def compile(
    program: SourceProgram,
    runner: RunnerSpec | None = None,
    limits: ResourceLimits | None = None,
    *,
    registry: dict[str, RunnerSpec] | None = None,
) -> Artifact | CompileError:
    """Prepare ``program`` for execution.

    Interpreted languages only get their source written out.  A compiler
    rejecting the program is a candidate failure and returns
    :class:`CompileError`; a compiler that cannot be spawned or hangs is an
    environment failure and raises.
    """
    runner = runner or resolve_runner(program.language_tag, registry)
    if normalize_language(program.language_tag) != runner.language_tag:
        raise UnknownLanguage(program.language_tag)
    directory = Path(tempfile.mkdtemp(prefix=f"gj-{runner.language_tag}-"))
    source_path = directory / runner.source_name
    source_path.write_text(program.source, encoding="utf-8")
    artifact = Artifact(runner, directory, source_path)
    if runner.compile_command is None:
        if runner.check_python_syntax:
            try:
                builtins.compile(program.source, runner.source_name, "exec", dont_inherit=True)
            except (SyntaxError, ValueError, RecursionError, MemoryError) as exc:
                artifact.close()
                return CompileError(f"{type(exc).__name__}: {exc}")
        return artifact

    artifact.exe_path = directory / "main.bin"
    argv = _expand(runner.compile_command, artifact, directory, directory / "input.txt")
    # Compilers get the caller's output cap but no address-space limit.
    climits = limits or ResourceLimits()
    result = _execute(argv, directory, b"", runner.compile_timeout, None, None, climits.output_cap)
    if result.status is Status.TIMEOUT:
        artifact.close()
        raise CompilerTimeout(f"compiler for {runner.language_tag} exceeded {runner.compile_timeout}s")
    if result.status is not Status.OK:
        artifact.close()
        return CompileError(result.stderr.decode("utf-8", "replace") or f"compiler exited with {result.exit_code}")
    return artifact


def _expand(template: Sequence[str], artifact: Artifact, workdir: Path, input_path: Path) -> list[str]:
    values = {
        "source": str(artifact.source_path),
        "exe": str(artifact.exe_path or ""),
        "input": str(input_path),
        "workdir": str(workdir),
    }
    return [part.format(**values) for part in template]


def run(handle: Artifact, input: bytes, limits: ResourceLimits) -> ExecutionResult:
    """Execute a compiled artifact once with ``input`` on its stdin."""
    policy = handle.runner.workdir_policy
    if policy is WorkdirPolicy.FRESH_TEMP:
        workdir = Path(tempfile.mkdtemp(prefix="gj-run-"))
    else:
        workdir = handle.directory / "work"
        workdir.mkdir(exist_ok=True)
    try:
        input_path = workdir / "input.txt"
        input_path.write_bytes(input)
        argv = _expand(handle.runner.run_command, handle, workdir, input_path)
        return _execute(argv, workdir, input, limits.wall_timeout, limits.cpu_timeout, limits.memory_cap, limits.output_cap)
    finally:
        if policy is WorkdirPolicy.FRESH_TEMP:
            shutil.rmtree(workdir, ignore_errors=True)


# Timed runs never overlap each other, process-wide.
TIMING_LANE = threading.Lock()


def run_timed(handle: Artifact, input: bytes, limits: ResourceLimits, repeats: int = 5) -> list[ExecutionResult]:
    """Run ``repeats`` times back to back inside the serialized timing lane.

    Repetition stops early after a non-ok run: a timeout is not going to
    become informative on the next attempt.  Callers use the minimum wall
    time of the ok results.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    results = []
    with TIMING_LANE:
        for _ in range(repeats):
            res = run(handle, input, limits)
            results.append(res)
            if not res.ok:
                break
    return results


def run_program(
    program: SourceProgram,
    input: bytes,
    limits: ResourceLimits,
    registry: dict[str, RunnerSpec] | None = None,
) -> ExecutionResult:
    """Compile and run in one step; compile failures become a result."""
    handle = compile(program, limits=limits, registry=registry)
    if isinstance(handle, CompileError):
        return ExecutionResult(Status.COMPILE_ERROR, b"", handle.diagnostics.encode(), 0.0, 0.0, 0)
    with handle:
        return run(handle, input, limits)


# ---------------------------------------------------------------------------
# process plumbing


def _child_env(workdir: Path) -> dict[str, str]:
    return {
        "PATH": os.environ.get("PATH", "/usr/bin:/bin"),
        "HOME": str(workdir),
        "TMPDIR": str(workdir),
        "LANG": "C.UTF-8",
        "PYTHONHASHSEED": "0",
        "PYTHONDONTWRITEBYTECODE": "1",
    }


def _limit_setter(cpu_timeout: float | None, memory_cap: int | None):
    def apply():
        resource.setrlimit(resource.RLIMIT_CORE, (0, 0))
        if cpu_timeout is not None:
            soft = max(1, math.ceil(cpu_timeout))
            resource.setrlimit(resource.RLIMIT_CPU, (soft, soft + 1))
        if memory_cap is not None:
            resource.setrlimit(resource.RLIMIT_AS, (memory_cap, memory_cap))

    return apply


class _Capture(threading.Thread):
    def __init__(self, stream, cap: int, on_overflow):
        super().__init__(daemon=True)
        self.stream = stream
        self.cap = cap
        self.on_overflow = on_overflow
        self.chunks: list[bytes] = []
        self.size = 0
        self.truncated = False

    def run(self):
        while True:
            chunk = self.stream.read1(_CHUNK) if hasattr(self.stream, "read1") else self.stream.read(_CHUNK)
            if not chunk:
                break
            room = self.cap - self.size
            if len(chunk) > room:
                if room > 0:
                    self.chunks.append(chunk[:room])
                    self.size += room
                if not self.truncated:
                    self.truncated = True
                    self.on_overflow()
                continue
            self.chunks.append(chunk)
            self.size += len(chunk)
        self.stream.close()

    @property
    def data(self) -> bytes:
        return b"".join(self.chunks)


def _feed(stream, data: bytes) -> None:
    try:
        if data:
            stream.write(data)
    except (BrokenPipeError, OSError):
        pass
    finally:
        try:
            stream.close()
        except OSError:
            pass


_MEMORY_MARKERS = (b"MemoryError", b"std::bad_alloc", b"Cannot allocate memory")


def _execute(
    argv: list[str],
    cwd: Path,
    data: bytes,
    wall_timeout: float,
    cpu_timeout: float | None,
    memory_cap: int | None,
    output_cap: int,
) -> ExecutionResult:
    start = time.perf_counter()
    try:
        proc = subprocess.Popen(
            argv,
            cwd=cwd,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            close_fds=True,
            start_new_session=True,
            env=_child_env(cwd),
            preexec_fn=_limit_setter(cpu_timeout, memory_cap),
        )
    except OSError as exc:
        raise SpawnFailure(f"cannot spawn {argv[0]!r}: {exc}") from exc

    lock = threading.Lock()
    state = {"reaped": False, "timed_out": False}

    def kill_group(reason: str | None = None):
        with lock:
            if state["reaped"]:
                return
            if reason:
                state[reason] = True
            try:
                os.killpg(proc.pid, signal.SIGKILL)
            except (ProcessLookupError, PermissionError):
                pass

    out = _Capture(proc.stdout, output_cap, kill_group)
    err = _Capture(proc.stderr, output_cap, kill_group)
    feeder = threading.Thread(target=_feed, args=(proc.stdin, data), daemon=True)
    timer = threading.Timer(wall_timeout, kill_group, args=("timed_out",))
    for t in (out, err, feeder, timer):
        t.start()

    _, wait_status, usage = os.wait4(proc.pid, 0)
    wall = time.perf_counter() - start
    timer.cancel()
    # Reap stragglers: anything still in the session dies with the group.
    try:
        os.killpg(proc.pid, signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        pass
    with lock:
        state["reaped"] = True
    proc.returncode = os.waitstatus_to_exitcode(wait_status)
    for t in (out, err, feeder):
        t.join()

    cpu = usage.ru_utime + usage.ru_stime
    peak = usage.ru_maxrss * 1024
    code = proc.returncode
    stderr = err.data
    if state["timed_out"] or code in (-signal.SIGXCPU,) or (
        cpu_timeout is not None and code == -signal.SIGKILL and cpu >= math.ceil(cpu_timeout)
    ):
        status = Status.TIMEOUT
    elif out.truncated or err.truncated:
        status = Status.OUTPUT_TRUNCATED
    elif code == 0:
        status = Status.OK
    elif memory_cap is not None and (peak >= 0.9 * memory_cap or any(m in stderr for m in _MEMORY_MARKERS)):
        status = Status.MEMORY_EXCEEDED
    else:
        status = Status.RUNTIME_ERROR
    return ExecutionResult(status, out.data, stderr, wall, cpu, peak, code)
