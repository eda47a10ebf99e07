from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gatejudge.bundle import CompareMode, Problem, SourceProgram, TestCase
from gatejudge.lattice import ComplexityClass
from gatejudge.correctness import FailureKind, PassRate, TestVerdict, compare_output, judge_candidate, judge_detailed

from conftest import APPENDIX_C


@pytest.mark.parametrize(
    "actual, expected, mode, want",
    [
        (b"1\n", b"1", "trimmed", True),
        (b"1 2  \n3\n\n", b"1 2\n3", "trimmed", True),
        (b"1 2", b"1  2", "token", True),
        (b"1 2", b"1  2", "exact", False),
        (b"1\r\n2\r\n", b"1\n2", "trimmed", True),
        (b"0", b"1", "exact", False),
        (b"0", b"1", "trimmed", False),
        (b"0", b"1", "token", False),
    ],
)
def test_compare_modes(actual, expected, mode, want):
    assert compare_output(actual, expected, mode) is want


def test_references_pass_their_own_tests(appendix_b, appendix_c):
    for problem in appendix_b + appendix_c:
        _, rate = judge_candidate(problem.reference_solution, problem)
        assert rate.value == 1, problem.id


def test_slower_appendix_c1_program_is_still_correct(appendix_c):
    problem = next(p for p in appendix_c if p.id == "abc388_c")
    before = SourceProgram("python", (APPENDIX_C / "abc388_c" / "candidates" / "before.py").read_text())
    _, rate = judge_candidate(before, problem)
    assert rate.full


def _toy_problem(outputs):
    tests = tuple(TestCase(str(i).encode(), out.encode(), CompareMode.TRIMMED) for i, out in enumerate(outputs))
    ref = SourceProgram("python", "print(2*int(input()))")
    return Problem("toy", "double it", tests, ref, ComplexityClass.C1, SourceProgram("python", "print(1)"))


def test_three_of_four_and_no_early_exit():
    problem = _toy_problem(["0", "2", "5", "6"])
    verdicts, rate = judge_candidate(SourceProgram("python", "print(2*int(input()))"), problem)
    assert rate.value == Fraction(3, 4)
    assert [v.test_index for v in verdicts] == [0, 1, 2, 3]
    assert verdicts[2] == TestVerdict(2, False, FailureKind.WRONG_ANSWER)


def test_failure_kinds():
    problem = _toy_problem(["0", "2"])
    crash = judge_detailed(SourceProgram("python", "raise ValueError"), problem)
    assert {v.failure_kind for v in crash.verdicts} == {FailureKind.RUNTIME_ERROR}
    broken = judge_detailed(SourceProgram("python", "print(("), problem)
    assert not broken.compile_ok
    assert {v.failure_kind for v in broken.verdicts} == {FailureKind.COMPILE_ERROR}
    assert broken.pass_rate.value == 0


def test_judging_is_deterministic(appendix_b):
    problem = appendix_b[0]
    wrong = SourceProgram("python", "n = int(input())\nprint(n // 2)\n")
    assert judge_candidate(wrong, problem)[0] == judge_candidate(wrong, problem)[0]
    assert judge_candidate(wrong, problem, workers=1)[0] == judge_candidate(wrong, problem, workers=4)[0]


@given(st.lists(st.booleans(), min_size=1, max_size=40))
def test_pass_rate_is_exact_and_monotone(flags):
    verdicts = [TestVerdict(i, f, None if f else FailureKind.WRONG_ANSWER) for i, f in enumerate(flags)]
    rate = PassRate.of(verdicts)
    assert rate.value == Fraction(sum(flags), len(flags))
    assert rate.full == all(flags)
    more = PassRate.of(verdicts + [TestVerdict(len(flags), True)])
    less = PassRate.of(verdicts + [TestVerdict(len(flags), False, FailureKind.TIMEOUT)])
    assert less.value <= rate.value <= more.value


def test_verdict_invariant():
    with pytest.raises(ValueError):
        TestVerdict(0, True, FailureKind.TIMEOUT)
    with pytest.raises(ValueError):
        TestVerdict(0, False)
