"""Command-line interface.

Exit codes: 0 success, 1 input or validation error, 2 environment failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import __version__
from .bundle import MANIFEST_NAME, ResourceLimits, SourceProgram, load_bundle, normalize_language, problem_index
from .complexity import EmpiricalJudge, EstimatorConfig, ExternalJudge, judge_complexity
from .correctness import judge_detailed
from .errors import EnvironmentFailure, InputError, JudgeError, UnknownProblemId
from .grouprl import DEFAULT_BAND, DEFAULT_EPSILON, RolloutGroup, compute_advantages
from .pairwise import TrainConfig, load_labeled, train_pairwise_scorer
from .pipeline import filter_rollouts, load_rollouts, score_rollouts
from .records import RecordStore, RunManifest, RunSummary, replay
from .report import Report
from .reward import RewardConfig
from .sandbox import load_registry, resolve_runner, run_program

log = logging.getLogger("gatejudge")

EXIT_OK, EXIT_INPUT, EXIT_ENV = 0, 1, 2
_EXT_LANG = {".py": "python", ".cpp": "cpp", ".cc": "cpp", ".c": "c"}


# ---------------------------------------------------------------------------
# helpers


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _digest_path(path: str | Path | None) -> str | None:
    if path is None:
        return None
    p = Path(path)
    h = hashlib.sha256()
    files = sorted(f for f in p.rglob("*") if f.is_file()) if p.is_dir() else [p]
    for f in files:
        h.update(str(f.relative_to(p) if p.is_dir() else f.name).encode())
        h.update(b"\0")
        h.update(f.read_bytes())
    return h.hexdigest()


def _parse_band(text: str) -> tuple[int, int]:
    sep = ".." if ".." in text else ","
    try:
        lo, hi = (int(x) for x in text.split(sep))
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must look like 1..5, got {text!r}") from None
    return lo, hi


def _load_config(args) -> dict[str, Any]:
    if not args.config:
        return {}
    try:
        return json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {args.config}: {exc}") from None


class Run:
    """Owns the record store of one invocation; writes the manifest first."""

    def __init__(self, args, command: str, snapshot: dict[str, Any], inputs: dict[str, Any]):
        self.store = None
        self.partial = False
        blob = json.dumps({"command": command, "config": snapshot, "inputs": inputs}, sort_keys=True)
        self.run_id = hashlib.sha256(blob.encode()).hexdigest()[:16]
        if args.store:
            self.store = RecordStore.create(args.store, self.run_id)
            self.store.append(RunManifest(self.run_id, command, snapshot, __version__, _now()))

    def finish(self, status: str) -> None:
        if self.store is not None and not self.store.closed:
            self.store.append(RunSummary(self.run_id, _now(), status))
            self.store.close()


def _reward_config(args, cfg) -> RewardConfig:
    base = RewardConfig.from_mapping(cfg.get("reward"))
    return RewardConfig(
        w_f=args.w_f if args.w_f is not None else base.w_f,
        w_t=args.w_t if args.w_t is not None else base.w_t,
        per_step_decay=args.decay if args.decay is not None else base.per_step_decay,
    )


def _estimator_config(args, cfg) -> EstimatorConfig:
    raw = dict(cfg.get("estimator", {}))
    if "schedule" in raw:
        raw["schedule"] = tuple(raw["schedule"])
    if args.seed is not None:
        raw["seed"] = args.seed
    if getattr(args, "repeats", None) is not None:
        raw["repeats"] = args.repeats
    return EstimatorConfig(**raw)


def _judge(args, cfg, registry):
    command = getattr(args, "judge_command", None) or cfg.get("judge", {}).get("command")
    if getattr(args, "judge", "empirical") == "external":
        if not command:
            raise InputError("--judge external requires --judge-command")
        return ExternalJudge(command)
    return EmpiricalJudge(_estimator_config(args, cfg), registry)


def _registry(cfg):
    return load_registry(cfg.get("runners"))


def _bundle(args):
    if not args.bundle:
        raise InputError("--bundle is required")
    return load_bundle(args.bundle)


# ---------------------------------------------------------------------------
# commands


def cmd_ingest(args) -> int:
    root = Path(args.bundle or ".")
    try:
        problems = load_bundle(root)
    except InputError as exc:
        print(f"INVALID {root}: {type(exc).__name__}: {exc}")
        return EXIT_INPUT
    cfg = _load_config(args)
    failures = 0
    for p in problems:
        line = f"ok  {p.id:<16} {len(p.tests):>3} tests  optimal {p.optimal_complexity.token}"
        if args.deep:
            problems_found = _deep_check(p, _registry(cfg), _estimator_config(args, cfg))
            if problems_found:
                failures += 1
                line = f"BAD {p.id:<16} " + "; ".join(problems_found)
        print(line)
    print(f"{len(problems)} problems")
    return EXIT_INPUT if failures else EXIT_OK


def _deep_check(problem, registry, est: EstimatorConfig) -> list[str]:
    issues = []
    outcome = judge_detailed(problem.reference_solution, problem, registry=registry)
    if not outcome.pass_rate.full:
        issues.append(f"reference passes {outcome.pass_rate.passed_count}/{outcome.pass_rate.total_count}")
    for size in est.schedule_for(problem):
        res = run_program(problem.input_generator, f"{size} {est.seed}\n".encode(), problem.limits, registry)
        if not res.ok or not res.stdout.strip():
            issues.append(f"generator fails at size {size} ({res.status.value})")
            break
    return issues


def cmd_exec(args) -> int:
    cfg = _load_config(args)
    source = Path(args.source).read_text(encoding="utf-8")
    lang = normalize_language(args.language or _EXT_LANG.get(Path(args.source).suffix, "python"))
    registry = _registry(cfg)
    resolve_runner(lang, registry)
    data = Path(args.input).read_bytes() if args.input else sys.stdin.buffer.read()
    limits = ResourceLimits.from_env()
    run = Run(args, "exec", {"language": lang}, {"source": _digest_path(args.source)})
    result = run_program(SourceProgram(lang, source), data, limits, registry)
    if run.store:
        run.store.append(result)
    run.finish("success")
    sys.stdout.write(result.stdout.decode("utf-8", "replace"))
    print(
        f"status={result.status.value} wall={result.wall_time:.4f}s cpu={result.cpu_time:.4f}s "
        f"peak={result.peak_memory}B exit={result.exit_code}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_score(args) -> int:
    cfg = _load_config(args)
    problems = problem_index(_bundle(args))
    hints = cfg.get("language_hints", ["python"])
    rollouts = load_rollouts(args.rollouts, hints)
    reward_cfg = _reward_config(args, cfg)
    band = args.band or tuple(cfg.get("band", DEFAULT_BAND))
    epsilon = args.epsilon if args.epsilon is not None else cfg.get("epsilon", DEFAULT_EPSILON)
    registry = _registry(cfg)
    snapshot = {
        "stage": args.stage,
        "reward": reward_cfg.to_dict(),
        "band": list(band),
        "epsilon": epsilon,
        "language_hints": hints,
        "judge": args.judge,
        "seed": args.seed,
    }
    inputs = {"bundle": _digest_path(args.bundle), "rollouts": _digest_path(args.rollouts)}
    with tempfile.TemporaryDirectory(prefix="gj-score-") as scratch:
        # The report is always rebuilt from a store; without --store it is a scratch one.
        if not args.store:
            args.store = str(Path(scratch) / "records.jsonl")
            report_path = None
        else:
            report_path = Path(args.store).with_name(Path(args.store).name + ".report.json")
        run = Run(args, "score", snapshot, inputs)
        try:
            result = score_rollouts(
                problems,
                rollouts,
                args.stage,
                reward_cfg,
                run.store,
                judge=_judge(args, cfg, registry) if args.stage == "stage2" else None,
                registry=registry,
                workers=args.workers,
                band=band,
                epsilon=epsilon,
            )
        except JudgeError:
            run.finish("failed")
            raise
        run.finish("partial" if result.partial else "success")
        report = Report.from_records(replay(args.store))
    if report_path is not None:
        report_path.write_text(report.to_json())
    print(report.to_table(), end="")
    return EXIT_OK


def cmd_estimate(args) -> int:
    cfg = _load_config(args)
    problems = problem_index(_bundle(args))
    if args.problem not in problems:
        raise UnknownProblemId(args.problem)
    problem = problems[args.problem]
    lang = normalize_language(args.language or _EXT_LANG.get(Path(args.candidate).suffix, "python"))
    program = SourceProgram(lang, Path(args.candidate).read_text(encoding="utf-8"))
    registry = _registry(cfg)
    judge = _judge(args, cfg, registry)
    snapshot = {"problem": args.problem, "judge": args.judge, "seed": args.seed}
    run = Run(args, "estimate", snapshot, {"bundle": _digest_path(args.bundle), "candidate": _digest_path(args.candidate)})
    verdict = judge_complexity(program, problem, judge)
    if run.store:
        run.store.append(verdict, {"problem_id": problem.id})
    run.finish("success")
    rel = verdict.relation.value + (f" by {verdict.steps} step(s)" if verdict.steps else "")
    print(f"{problem.id}: estimated {verdict.estimated.token}; reference {problem.optimal_complexity.token}; {rel}")
    if verdict.residuals:
        print("residuals: " + ", ".join(f"{c.token}={r:.4f}" for c, r in verdict.residuals.items()))
        print(f"confident: {verdict.confident}")
    return EXIT_OK


def cmd_filter(args) -> int:
    cfg = _load_config(args)
    problems = problem_index(_bundle(args))
    rollouts = load_rollouts(args.rollouts, cfg.get("language_hints", ["python"]))
    band = args.band or tuple(cfg.get("band", DEFAULT_BAND))
    registry = _registry(cfg)
    snapshot = {"criterion": args.criterion, "band": list(band), "judge": args.judge, "seed": args.seed}
    run = Run(args, "filter", snapshot, {"bundle": _digest_path(args.bundle), "rollouts": _digest_path(args.rollouts)})
    judge = _judge(args, cfg, registry) if args.criterion == "complexity" else None
    decisions = filter_rollouts(
        problems, rollouts, args.criterion, band, run.store, judge=judge, registry=registry, workers=args.workers
    )
    run.finish("success")
    for d in decisions:
        log.info("%s k=%d/%d kept=%s", d.problem_id, d.k, d.n, d.kept)
        if d.kept:
            print(d.problem_id)
    return EXIT_OK


def _read_groups(path: str) -> list[RolloutGroup]:
    text = Path(path).read_text(encoding="utf-8").strip()
    groups = []
    try:
        if text.startswith("[") and "\n" not in text:
            return [RolloutGroup.from_rewards("group-0", [float(x) for x in json.loads(text)])]
        for i, line in enumerate(l for l in text.splitlines() if l.strip()):
            rec = json.loads(line)
            if isinstance(rec, list):
                groups.append(RolloutGroup.from_rewards(f"group-{i}", [float(x) for x in rec]))
            else:
                groups.append(RolloutGroup.from_rewards(rec["problem_id"], [float(x) for x in rec["rewards"]]))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed rewards file {path}: {exc}") from None
    return groups


def cmd_advantage(args) -> int:
    groups = _read_groups(args.rewards)
    epsilon = args.epsilon if args.epsilon is not None else DEFAULT_EPSILON
    run = Run(args, "advantage", {"epsilon": epsilon}, {"rewards": _digest_path(args.rewards)})
    for g in groups:
        adv = compute_advantages(g, epsilon)
        if run.store:
            run.store.append(adv, {"problem_id": g.problem_id})
        print(json.dumps({"problem_id": g.problem_id, "advantages": [round(a, 12) + 0.0 for a in adv.advantages]}))
    run.finish("success")
    return EXIT_OK


def cmd_pairtrain(args) -> int:
    cfg = _load_config(args)
    base = cfg.get("pairwise", {})
    tc = TrainConfig(
        learning_rate=args.lr if args.lr is not None else base.get("learning_rate", 0.5),
        epochs=args.epochs if args.epochs is not None else base.get("epochs", 200),
        lambda_swap=args.lambda_swap if args.lambda_swap is not None else base.get("lambda_swap", 0.1),
        seed=args.seed if args.seed is not None else base.get("seed", 0),
        position_terms=args.position_terms or base.get("position_terms", False),
    )
    try:
        labeled = load_labeled(args.dataset)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None
    run = Run(args, "pairtrain", tc.to_dict(), {"dataset": _digest_path(args.dataset)})
    result = train_pairwise_scorer(labeled, tc)
    out = Path(args.out)
    result.scorer.save(out)
    curve_path = out.with_name(out.stem + ".curve.json")
    curve_path.write_text(json.dumps({"loss": result.loss_curve, "accuracy": result.accuracy}, indent=1) + "\n")
    run.finish("success")
    print(f"scorer -> {out}; loss {result.loss_curve[0]:.6f} -> {result.loss_curve[-1]:.6f}; accuracy {result.accuracy:.3f}")
    return EXIT_OK


def cmd_report(args) -> int:
    path = args.store_path or args.store
    if not path or not Path(path).exists():
        raise InputError(f"no record store at {path}")
    report = Report.from_records(replay(path))
    if args.json:
        print(report.to_json(), end="")
    else:
        print(report.to_table(), end="")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bundle", help="problem bundle directory")
    common.add_argument("--config", help="JSON engine configuration file")
    common.add_argument("--seed", type=int, default=None, help="seed for generators and training")
    common.add_argument("--workers", type=int, default=None, help="parallel correctness runs")
    common.add_argument("--store", help="record store to write (line-delimited JSON)")
    common.add_argument("-v", "--verbose", action="store_true")

    judge_opts = argparse.ArgumentParser(add_help=False)
    judge_opts.add_argument("--judge", choices=("empirical", "external"), default="empirical")
    judge_opts.add_argument("--judge-command", help="external complexity judge command line")
    judge_opts.add_argument("--repeats", type=int, default=None, help="timed repeats per size")

    parser = argparse.ArgumentParser(prog="gatejudge", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="validate a bundle")
    p.add_argument("--deep", action="store_true", help="also run references and generators")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("exec", parents=[common], help="run one program in the sandbox")
    p.add_argument("source")
    p.add_argument("--input", help="file fed to stdin (default: our stdin)")
    p.add_argument("--language")
    p.set_defaults(func=cmd_exec)

    p = sub.add_parser("score", parents=[common, judge_opts], help="judge and reward rollouts")
    p.add_argument("--rollouts", required=True)
    p.add_argument("--stage", choices=("stage1", "stage2"), default="stage1")
    p.add_argument("--band", type=_parse_band, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--w-f", dest="w_f", type=float, default=None)
    p.add_argument("--w-t", dest="w_t", type=float, default=None)
    p.add_argument("--decay", type=float, default=None, help="time-reward decay per lattice step")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("estimate", parents=[common, judge_opts], help="estimate a candidate's complexity class")
    p.add_argument("candidate")
    p.add_argument("--problem", required=True)
    p.add_argument("--language")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("filter", parents=[common, judge_opts], help="on-policy filtering of problems")
    p.add_argument("--rollouts", required=True)
    p.add_argument("--criterion", choices=("difficulty", "complexity"), default="difficulty")
    p.add_argument("--band", type=_parse_band, default=None)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("advantage", parents=[common], help="group-normalized advantages")
    p.add_argument("rewards", help="JSON list, or JSON lines of lists / {problem_id, rewards}")
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(func=cmd_advantage)

    p = sub.add_parser("pairtrain", parents=[common], help="train the pairwise scorer")
    p.add_argument("dataset")
    p.add_argument("--out", default="scorer.json")
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--lambda-swap", dest="lambda_swap", type=float, default=None)
    p.add_argument("--position-terms", action="store_true", help="train slot-dependent terms too (use --lr around 1e-3)")
    p.set_defaults(func=cmd_pairtrain)

    p = sub.add_parser("report", parents=[common], help="aggregate a record store")
    p.add_argument("store_path", nargs="?")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UnknownProblemId as exc:
        # A rollout or candidate naming a problem the bundle lacks aborts the batch.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENV
    except EnvironmentFailure as exc:
        print(f"environment failure: {exc}", file=sys.stderr)
        return EXIT_ENV
    except (InputError, JudgeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
