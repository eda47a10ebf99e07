import json
import shutil

import pytest
from hypothesis import given, strategies as st

from gatejudge.bundle import (
    CompareMode,
    ResourceLimits,
    SourceProgram,
    TestCase,
    dump_bundle,
    extract_program,
    load_bundle,
    normalize_language,
)
from gatejudge.errors import DuplicateId, MissingManifest, SchemaViolation, UnknownComplexityLabel
from gatejudge.lattice import ComplexityClass

from conftest import APPENDIX_B, APPENDIX_C


def test_fixture_bundles_load(appendix_b, appendix_c):
    assert [p.id for p in appendix_b] == ["lc488_q1", "lc488_q2", "lc488_q3", "lc488_q4"]
    assert [p.id for p in appendix_c] == ["abc388_c", "arc194_b", "arc195_a"]
    labels = {p.id: p.optimal_complexity for p in appendix_b + appendix_c}
    assert labels["lc488_q4"] is ComplexityClass.CN2
    assert labels["arc194_b"] is ComplexityClass.CNLOGN


def test_load_is_pure(appendix_b):
    assert load_bundle(APPENDIX_B) == appendix_b


def test_round_trip(tmp_path, appendix_b, appendix_c):
    for problems in (appendix_b, appendix_c):
        out = tmp_path / problems[0].id
        dump_bundle(problems, out)
        assert load_bundle(out) == problems


def _copy(tmp_path):
    dst = tmp_path / "bundle"
    shutil.copytree(APPENDIX_B, dst)
    return dst


def _edit(root, pid, **changes):
    path = root / pid / "problem.json"
    doc = json.loads(path.read_text())
    doc.update(changes)
    path.write_text(json.dumps(doc))


def test_missing_manifest(tmp_path):
    with pytest.raises(MissingManifest):
        load_bundle(tmp_path)


def test_unknown_label_rejects_bundle(tmp_path):
    root = _copy(tmp_path)
    _edit(root, "lc488_q2", optimal_complexity="O(2^n)")
    with pytest.raises(UnknownComplexityLabel):
        load_bundle(root)


def test_duplicate_id(tmp_path):
    root = _copy(tmp_path)
    _edit(root, "lc488_q2", id="lc488_q1")
    with pytest.raises(DuplicateId):
        load_bundle(root)


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"tests": []}, "tests"),
        ({"statement": "../../etc/passwd"}, "statement"),
        ({"reference_solution": {"language": "python", "path": "nope.py"}}, "reference_solution"),
        ({"size_schedule": [8, 4]}, "size_schedule"),
        ({"limits": {"wall_timeout": 1, "bogus": 2}}, "limits"),
    ],
)
def test_schema_violations_name_the_field(tmp_path, changes, field):
    root = _copy(tmp_path)
    _edit(root, "lc488_q3", **changes)
    with pytest.raises(SchemaViolation) as err:
        load_bundle(root)
    assert err.value.problem_id == "lc488_q3"
    assert err.value.field == field


def test_test_case_rules():
    with pytest.raises(ValueError):
        TestCase(b"1", b"")
    assert TestCase(b"1", b"", CompareMode.EXACT).expected_output == b""


def test_limits_from_env(monkeypatch):
    monkeypatch.setenv("GATEJUDGE_WALL_TIMEOUT", "3")
    monkeypatch.setenv("GATEJUDGE_CPU_TIMEOUT", "2")
    lim = ResourceLimits.from_env()
    assert (lim.wall_timeout, lim.cpu_timeout) == (3.0, 2.0)
    with pytest.raises(ValueError):
        ResourceLimits(wall_timeout=1, cpu_timeout=2)


# --- extraction -------------------------------------------------------------


def test_no_block_is_absent():
    assert extract_program("just prose, no code", ["python"]) is None


def test_draft_then_final_takes_last_block():
    raw = "draft:\n```python\nprint(1)\n```\nfinal:\n```python\nprint(2)\n```\n"
    assert extract_program(raw, ["python"]) == SourceProgram("python", "print(2)\n")


def test_hinted_language_preferred_and_untagged_inherits():
    raw = "```python\nprint(1)\n```\n```text\nsample output\n```\n"
    assert extract_program(raw, ["python"]).source == "print(1)\n"
    assert extract_program("```\nx = 1\n```", ["cpp"]).language_tag == "cpp"
    assert extract_program("```py3\nx = 1\n```", ["python"]).language_tag == "python"


def test_empty_blocks_are_skipped():
    raw = "```python\nprint(1)\n```\n```python\n\n```\n"
    assert extract_program(raw, ["python"]).source == "print(1)\n"


def test_rollout_fixture_extractions():
    # Hand-labelled: which rollouts carry code, and which draft/final pairs resolve to the final.
    rows = [json.loads(l) for l in (APPENDIX_B / "rollouts.jsonl").read_text().splitlines()]
    codeless = {(r["problem_id"], r["rollout_index"]) for r in rows if extract_program(r["response"], ["python"]) is None}
    assert codeless == {("lc488_q1", 6), ("lc488_q2", 5), ("lc488_q3", 4), ("lc488_q4", 4)}
    q1_final = extract_program(rows[2]["response"], ["python"]).source
    assert q1_final.strip() == (APPENDIX_B / "lc488_q1" / "reference.py").read_text().strip()


@given(st.text(max_size=300))
def test_extraction_never_empty(text):
    prog = extract_program(text, ["python"])
    assert prog is None or prog.source.strip()


def test_language_aliases():
    assert normalize_language("C++") == "cpp"
    assert normalize_language("Python3") == "python"
