import json
import math
import shutil
import subprocess
import sys

import pytest

from gatejudge.cli import main
from gatejudge.records import replay

from conftest import APPENDIX_B, APPENDIX_C, FIXTURES
from oracles import all_flag_patterns, band_oracle

ROLLOUTS = APPENDIX_B / "rollouts.jsonl"


def stub_judge(tmp_path, token):
    script = tmp_path / "judge.py"
    script.write_text(f"import sys\nsys.stdin.read()\nprint({token!r})\n")
    return f"{sys.executable} {script}"


def q1_rollouts(tmp_path):
    path = tmp_path / "q1.jsonl"
    rows = [l for l in ROLLOUTS.read_text().splitlines() if '"lc488_q1"' in l]
    path.write_text("\n".join(rows) + "\n")
    return path


def test_ingest_valid_bundle(capsys):
    assert main(["ingest", "--bundle", str(APPENDIX_B)]) == 0
    out = capsys.readouterr().out
    assert out.count("\nok ") + out.startswith("ok ") == 4 and "4 problems" in out


def test_ingest_missing_generator(tmp_path, capsys):
    root = tmp_path / "b"
    shutil.copytree(APPENDIX_B, root)
    (root / "lc488_q3" / "generator.py").unlink()
    assert main(["ingest", "--bundle", str(root)]) == 1
    assert "lc488_q3" in capsys.readouterr().out


def test_ingest_empty_directory(tmp_path, capsys):
    assert main(["ingest", "--bundle", str(tmp_path)]) == 1
    assert "MissingManifest" in capsys.readouterr().out


def test_ingest_deep(capsys):
    assert main(["ingest", "--deep", "--bundle", str(APPENDIX_B)]) == 0


def test_score_stage1_then_stage2(tmp_path, capsys):
    rollouts = q1_rollouts(tmp_path)
    s1, s2 = tmp_path / "s1.jsonl", tmp_path / "s2.jsonl"
    assert main(["score", "--bundle", str(APPENDIX_B), "--rollouts", str(rollouts), "--store", str(s1)]) == 0
    agg = json.loads((tmp_path / "s1.jsonl.report.json").read_text())["aggregates"]
    assert agg["gate_open_fraction"] == 0

    judge = stub_judge(tmp_path, "O(n)")
    argv = ["score", "--stage", "stage2", "--bundle", str(APPENDIX_B), "--rollouts", str(rollouts)]
    assert main(argv + ["--store", str(s2), "--judge", "external", "--judge-command", judge]) == 0
    agg = json.loads((tmp_path / "s2.jsonl.report.json").read_text())["aggregates"]
    assert agg["gate_open_fraction"] == 3 / 8
    records = replay(s2)
    assert sum(r.kind == "ComplexityVerdict" for r in records) == 3
    assert records[0].kind == "RunManifest" and records[-1].kind == "RunSummary"
    assert records[-1].value.exit_status == "success"


def test_score_unknown_problem_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"problem_id": "missing", "rollout_index": 0, "response": "x"}) + "\n")
    assert main(["score", "--bundle", str(APPENDIX_B), "--rollouts", str(bad)]) == 2
    assert "missing" in capsys.readouterr().err


def test_score_malformed_rollouts_exit_1(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json\n")
    assert main(["score", "--bundle", str(APPENDIX_B), "--rollouts", str(bad)]) == 1


def test_environment_failure_exits_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    runners = tmp_path / "runners.json"
    runners.write_text(json.dumps({"python": {"run": ["/nonexistent/python", "{source}"], "source_name": "m.py"}}))
    cfg.write_text(json.dumps({"runners": str(runners)}))
    argv = ["score", "--bundle", str(APPENDIX_B), "--rollouts", str(q1_rollouts(tmp_path)), "--config", str(cfg)]
    assert main(argv) == 2


def test_filter_prints_kept_problems(tmp_path, capsys):
    assert main(["filter", "--bundle", str(APPENDIX_B), "--rollouts", str(ROLLOUTS)]) == 0
    assert capsys.readouterr().out.split() == ["lc488_q1", "lc488_q2", "lc488_q3", "lc488_q4"]
    # q1 has k = 3 fully passing rollouts and the others k = 4
    assert main(["filter", "--bundle", str(APPENDIX_B), "--rollouts", str(ROLLOUTS), "--band", "4..6"]) == 0
    assert capsys.readouterr().out.split() == ["lc488_q2", "lc488_q3", "lc488_q4"]


def test_filter_omits_unsolved(tmp_path, capsys):
    path = tmp_path / "zero.jsonl"
    rows = [{"problem_id": "lc488_q2", "rollout_index": i, "response": "```python\nprint(0)\n```"} for i in range(8)]
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    assert main(["filter", "--bundle", str(APPENDIX_B), "--rollouts", str(path)]) == 0
    assert capsys.readouterr().out.strip() == ""


def test_filter_band_matches_oracle_on_records(tmp_path, capsys):
    store = tmp_path / "f.jsonl"
    argv = ["filter", "--bundle", str(APPENDIX_B), "--rollouts", str(ROLLOUTS), "--band", "2..6", "--store", str(store)]
    assert main(argv) == 0
    for rec in replay(store):
        if rec.kind == "FilterDecision":
            flags = [True] * rec.value.k + [False] * (rec.value.n - rec.value.k)
            assert rec.value.kept == band_oracle(flags, (2, 6))
            assert rec.value.band == (2, 6)


def test_estimate_with_external_stub(tmp_path, capsys):
    candidate = APPENDIX_C / "abc388_c" / "candidates" / "before.py"
    argv = ["estimate", str(candidate), "--problem", "abc388_c", "--bundle", str(APPENDIX_C)]
    assert main(argv + ["--judge", "external", "--judge-command", stub_judge(tmp_path, "O(n log n)")]) == 0
    out = capsys.readouterr().out
    assert "estimated O(n log n)" in out and "worse by 1 step" in out


def test_estimate_unknown_problem(capsys):
    argv = ["estimate", str(ROLLOUTS), "--problem", "zzz", "--bundle", str(APPENDIX_C)]
    assert main(argv) == 2


def test_advantage(tmp_path, capsys):
    rewards = tmp_path / "r.json"
    rewards.write_text("[1, 1, 0, 0]")
    assert main(["advantage", str(rewards)]) == 0
    assert json.loads(capsys.readouterr().out)["advantages"] == [1.0, 1.0, -1.0, -1.0]
    rewards.write_text('{"problem_id": "a", "rewards": [0.5, 0.5]}\n[0, 2, 4]\n')
    assert main(["advantage", str(rewards)]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert lines[0]["advantages"] == [0.0, 0.0] and lines[1]["advantages"][1] == 0.0
    rewards.write_text("[1]")
    assert main(["advantage", str(rewards)]) == 1


def test_pairtrain_is_byte_deterministic(tmp_path, capsys):
    data = FIXTURES / "pairs" / "toy.jsonl"
    for name in ("a.json", "b.json"):
        assert main(["pairtrain", str(data), "--out", str(tmp_path / name), "--seed", "3"]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.curve.json").read_bytes() == (tmp_path / "b.curve.json").read_bytes()


def test_report_mean_matches_rows(tmp_path, capsys):
    store = tmp_path / "s.jsonl"
    assert main(["score", "--bundle", str(APPENDIX_B), "--rollouts", str(ROLLOUTS), "--store", str(store)]) == 0
    capsys.readouterr()
    assert main(["report", str(store), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    totals = [row["reward"]["total"] for row in doc["rows"]]
    assert len(totals) == 32
    assert math.isclose(doc["aggregates"]["mean_reward"], sum(totals) / len(totals), rel_tol=1e-12)
    assert main(["report", str(tmp_path / "absent.jsonl")]) == 1


def test_exec(tmp_path):
    src = tmp_path / "double.py"
    src.write_text("print(2 * int(input()))\n")
    proc = subprocess.run(
        [sys.executable, "-m", "gatejudge", "exec", str(src)], input=b"21\n", capture_output=True
    )
    assert proc.returncode == 0
    assert proc.stdout == b"42\n" and b"status=ok" in proc.stderr


def test_module_entry_point_exit_codes(tmp_path):
    ok = subprocess.run([sys.executable, "-m", "gatejudge", "ingest", "--bundle", str(APPENDIX_B)], capture_output=True)
    bad = subprocess.run([sys.executable, "-m", "gatejudge", "ingest", "--bundle", str(tmp_path)], capture_output=True)
    assert (ok.returncode, bad.returncode) == (0, 1)
