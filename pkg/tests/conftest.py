import os
import signal
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
APPENDIX_B = FIXTURES / "appendix_b"
APPENDIX_C = FIXTURES / "appendix_c"


@pytest.fixture(scope="session")
def appendix_b():
    from gatejudge.bundle import load_bundle

    return load_bundle(APPENDIX_B)


@pytest.fixture(scope="session")
def appendix_c():
    from gatejudge.bundle import load_bundle

    return load_bundle(APPENDIX_C)


def descendants(pid: int) -> list[int]:
    """Live processes whose parent chain reaches ``pid`` (from /proc)."""
    parents = {}
    for entry in os.listdir("/proc"):
        if not entry.isdigit():
            continue
        try:
            with open(f"/proc/{entry}/stat") as fh:
                stat = fh.read()
        except OSError:
            continue
        fields = stat[stat.rindex(")") + 2 :].split()
        if fields[0] == "Z":
            continue
        parents[int(entry)] = int(fields[1])
    out = []
    for child in parents:
        p = child
        while p in parents and p != pid and p > 1:
            p = parents[p]
        if p == pid and child != pid:
            out.append(child)
    return out


ORPHAN_MARK = "gj-orphan-mark"


def marked() -> list[int]:
    """Processes whose command line names a sandbox directory or the test marker.

    Catches grandchildren that were re-parented away from us.
    """
    out = []
    for entry in os.listdir("/proc"):
        if not entry.isdigit() or int(entry) == os.getpid():
            continue
        try:
            with open(f"/proc/{entry}/cmdline", "rb") as fh:
                cmd = fh.read()
            with open(f"/proc/{entry}/stat") as fh:
                stat = fh.read()
        except OSError:
            continue
        if stat[stat.rindex(")") + 2] == "Z":
            continue
        if ORPHAN_MARK.encode() in cmd or b"/gj-" in cmd:
            out.append(int(entry))
    return out


def _live() -> set[int]:
    return set(descendants(os.getpid())) | set(marked())


@pytest.fixture
def no_orphans():
    before = _live()
    yield
    leftover = _live() - before
    for p in leftover:
        os.kill(p, signal.SIGKILL)
    assert not leftover, f"orphaned processes: {sorted(leftover)}"


# Acceptance criteria record their outcome here; the summary hook prints them.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
