"""Pairwise preference judging, binary-outcome reward and a linear pairwise scorer.

The built-in scorer maps (context, response) to a fixed feature vector
``phi`` and scores a pair as::

    d(ctx, a, b) = w . (phi_a - phi_b) + p . (phi_a + phi_b) + bias

With ``p = 0`` and ``bias = 0`` (the default) the score is antisymmetric by
construction.  The optional position terms model a scorer that prefers one
slot over the other; the swap-consistency penalty is what pushes them back
to zero during training.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import random
import re
import shlex
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol, Sequence

import numpy as np

from .errors import DivergenceDetected, EmptyAfterTieFiltering, ExternalJudgeProtocolError, SpawnFailure

SCORER_FORMAT = "gatejudge-scorer/1"
DEFAULT_TIE_THRESHOLD = 0.05


class Outcome(str, enum.Enum):
    A_WINS = "a_wins"
    B_WINS = "b_wins"
    TIE = "tie"


@dataclass(frozen=True)
class ResponsePair:
    context: str
    response_a: str
    response_b: str

    def __post_init__(self):
        if not self.response_a or not self.response_b:
            raise ValueError("responses must be nonempty")

    def swapped(self) -> "ResponsePair":
        return ResponsePair(self.context, self.response_b, self.response_a)


@dataclass(frozen=True)
class PairJudgment:
    outcome: Outcome
    margin: float


def judgment_from_margin(margin: float, tie_threshold: float = DEFAULT_TIE_THRESHOLD) -> PairJudgment:
    if not math.isfinite(margin):
        raise ValueError(f"non-finite margin {margin}")
    if abs(margin) <= tie_threshold:
        return PairJudgment(Outcome.TIE, margin)
    return PairJudgment(Outcome.A_WINS if margin > 0 else Outcome.B_WINS, margin)


# ---------------------------------------------------------------------------
# features

_WORD = re.compile(r"\w+", re.UNICODE)


def text_features(context: str, response: str) -> np.ndarray:
    """Hand-built text statistics; ``textstats-v1``."""
    words = [w.lower() for w in _WORD.findall(response)]
    ctx_words = {w.lower() for w in _WORD.findall(context)}
    lines = response.splitlines() or [""]
    nonblank = [ln.strip() for ln in lines if ln.strip()]
    n_words = len(words)
    n_chars = len(response)
    bigrams = list(zip(words, words[1:]))
    return np.array(
        [
            math.log1p(n_chars),
            math.log1p(n_words),
            min(sum(map(len, words)) / n_words, 20.0) / 20.0 if n_words else 0.0,
            len(set(words)) / n_words if n_words else 0.0,
            len(set(words) & ctx_words) / len(set(words)) if words else 0.0,
            math.log1p(len(lines)),
            min(response.count("```") // 2, 5) / 5.0,
            sum(c.isdigit() for c in response) / n_chars if n_chars else 0.0,
            1.0 - len(set(nonblank)) / len(nonblank) if nonblank else 0.0,
            sum(not c.isalnum() and not c.isspace() for c in response) / n_chars if n_chars else 0.0,
            sum(ln.startswith(("-", "*", "1.", "2.", "3.")) for ln in nonblank) / len(nonblank) if nonblank else 0.0,
            1.0 - len(set(bigrams)) / len(bigrams) if bigrams else 0.0,
        ],
        dtype=float,
    )


FEATURE_EXTRACTORS: dict[str, Callable[[str, str], np.ndarray]] = {"textstats-v1": text_features}
DEFAULT_EXTRACTOR = "textstats-v1"


def feature_matrices(pairs: Sequence[ResponsePair], extractor: str = DEFAULT_EXTRACTOR) -> tuple[np.ndarray, np.ndarray]:
    phi = FEATURE_EXTRACTORS[extractor]
    fa = np.array([phi(p.context, p.response_a) for p in pairs], dtype=float)
    fb = np.array([phi(p.context, p.response_b) for p in pairs], dtype=float)
    return fa, fb


# ---------------------------------------------------------------------------
# scorer


class PairScorer(Protocol):
    """Anything that returns a signed preference margin for (a over b)."""

    def margin(self, context: str, response_a: str, response_b: str) -> float: ...


@dataclass
class PairwiseScorer:
    feature_dim: int
    weights: np.ndarray
    feature_extractor_id: str = DEFAULT_EXTRACTOR
    position_weights: np.ndarray | None = None
    position_bias: float = 0.0

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.feature_dim,):
            raise ValueError("weights length must equal feature_dim")
        if self.position_weights is not None:
            self.position_weights = np.asarray(self.position_weights, dtype=float)
            if self.position_weights.shape != (self.feature_dim,):
                raise ValueError("position_weights length must equal feature_dim")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite")

    @classmethod
    def zeros(cls, extractor: str = DEFAULT_EXTRACTOR, position_terms: bool = False) -> "PairwiseScorer":
        dim = len(FEATURE_EXTRACTORS[extractor]("", "x"))
        return cls(dim, np.zeros(dim), extractor, np.zeros(dim) if position_terms else None, 0.0)

    @property
    def has_position_terms(self) -> bool:
        return self.position_weights is not None

    @property
    def judge_id(self) -> str:
        return "builtin:" + hashlib.sha256(self.to_json().encode()).hexdigest()[:16]

    def margins(self, fa: np.ndarray, fb: np.ndarray) -> np.ndarray:
        d = (fa - fb) @ self.weights
        if self.position_weights is not None:
            d = d + (fa + fb) @ self.position_weights + self.position_bias
        return d

    def margin(self, context: str, response_a: str, response_b: str) -> float:
        phi = FEATURE_EXTRACTORS[self.feature_extractor_id]
        fa = phi(context, response_a)
        fb = phi(context, response_b)
        if self.position_weights is None:
            # Score each side separately so that d(a,b) = -d(b,a) holds bit for bit.
            return float(fa @ self.weights) - float(fb @ self.weights)
        return float(self.margins(fa[None, :], fb[None, :])[0])

    # parameters flattened as [w, p, bias] (p and bias only with position terms)
    def params(self) -> np.ndarray:
        if self.position_weights is None:
            return self.weights.copy()
        return np.concatenate([self.weights, self.position_weights, [self.position_bias]])

    def with_params(self, theta: np.ndarray) -> "PairwiseScorer":
        dim = self.feature_dim
        if self.position_weights is None:
            return PairwiseScorer(dim, theta[:dim].copy(), self.feature_extractor_id)
        return PairwiseScorer(
            dim, theta[:dim].copy(), self.feature_extractor_id, theta[dim : 2 * dim].copy(), float(theta[2 * dim])
        )

    def to_json(self) -> str:
        doc = {
            "format": SCORER_FORMAT,
            "feature_extractor_id": self.feature_extractor_id,
            "feature_dim": self.feature_dim,
            "weights": [float(x) for x in self.weights],
            "position_weights": None if self.position_weights is None else [float(x) for x in self.position_weights],
            "position_bias": float(self.position_bias),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PairwiseScorer":
        doc = json.loads(text)
        if doc.get("format") != SCORER_FORMAT:
            raise ValueError("not a scorer file")
        pw = doc.get("position_weights")
        return cls(
            int(doc["feature_dim"]),
            np.array(doc["weights"], dtype=float),
            doc["feature_extractor_id"],
            None if pw is None else np.array(pw, dtype=float),
            float(doc.get("position_bias", 0.0)),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PairwiseScorer":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# judging


@dataclass
class ExternalPairJudge:
    """Pair judge backed by a command.

    The command reads one JSON object (``context``, ``response_a``,
    ``response_b``) and prints ``MARGIN <signed decimal>`` on its first line.
    """

    command: Sequence[str] | str
    timeout: float = 60.0

    _LINE = re.compile(r"^MARGIN ([+-]?(?:\d+\.?\d*|\.\d+))$")

    def __post_init__(self):
        if isinstance(self.command, str):
            self.command = shlex.split(self.command)

    @property
    def judge_id(self) -> str:
        return "external:" + " ".join(self.command)

    def margin(self, context: str, response_a: str, response_b: str) -> float:
        request = json.dumps({"context": context, "response_a": response_a, "response_b": response_b}) + "\n"
        try:
            proc = subprocess.run(list(self.command), input=request.encode(), capture_output=True, timeout=self.timeout)
        except FileNotFoundError as exc:
            raise SpawnFailure(f"external pair judge not found: {exc}") from exc
        except subprocess.TimeoutExpired:
            raise ExternalJudgeProtocolError(f"external pair judge exceeded {self.timeout}s") from None
        if proc.returncode != 0:
            raise ExternalJudgeProtocolError(f"external pair judge exited with status {proc.returncode}")
        line = proc.stdout.decode("utf-8", "replace").split("\n", 1)[0].rstrip("\r")
        m = self._LINE.match(line)
        if not m:
            raise ExternalJudgeProtocolError(f"malformed pair judge output {line!r}")
        return float(m.group(1))


@dataclass
class JudgmentCache:
    entries: dict[str, PairJudgment] = field(default_factory=dict)
    misses: int = 0

    @staticmethod
    def key(judge_id: str, context: str, rollout: str, reference: str, tie_threshold: float) -> str:
        blob = json.dumps([judge_id, context, rollout, reference, tie_threshold]).encode()
        return hashlib.sha256(blob).hexdigest()


def binary_outcome_reward(
    rollout_response: str,
    reference_response: str,
    context: str,
    judge: PairScorer,
    *,
    tie_threshold: float = DEFAULT_TIE_THRESHOLD,
    cache: JudgmentCache | None = None,
) -> float:
    """1 if the rollout beats the reference, 0 if it loses, 0.5 on a tie."""
    judge_id = getattr(judge, "judge_id", repr(judge))
    key = JudgmentCache.key(judge_id, context, rollout_response, reference_response, tie_threshold)
    judgment = cache.entries.get(key) if cache is not None else None
    if judgment is None:
        judgment = judgment_from_margin(judge.margin(context, rollout_response, reference_response), tie_threshold)
        if cache is not None:
            cache.entries[key] = judgment
            cache.misses += 1
    return {Outcome.A_WINS: 1.0, Outcome.B_WINS: 0.0, Outcome.TIE: 0.5}[judgment.outcome]


# ---------------------------------------------------------------------------
# losses and training


def swap_consistency_loss(scorer: PairScorer, batch: Sequence[ResponsePair]) -> float:
    """Mean of (d(a,b) - (-d(b,a)))^2 over the batch."""
    if not batch:
        raise ValueError("batch must be nonempty")
    terms = []
    for p in batch:
        forward = scorer.margin(p.context, p.response_a, p.response_b)
        backward = scorer.margin(p.context, p.response_b, p.response_a)
        terms.append((forward + backward) ** 2)
    return math.fsum(terms) / len(terms)


@dataclass(frozen=True)
class TrainConfig:
    # The default step suits the antisymmetric scorer.  Position terms add
    # curvature of order lambda_swap * |phi_a + phi_b|^2 and need ~1e-3.
    learning_rate: float = 0.5
    epochs: int = 200
    lambda_swap: float = 0.1
    seed: int = 0
    position_terms: bool = False
    extractor: str = DEFAULT_EXTRACTOR

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "lambda_swap": self.lambda_swap,
            "seed": self.seed,
            "position_terms": self.position_terms,
            "extractor": self.extractor,
        }


@dataclass
class TrainingProblem:
    """Feature-space view of a labeled dataset.

    ``sign`` is +1 where response a won and -1 where b won; ``pref`` masks
    out ties, which only enter the swap term.
    """

    fa: np.ndarray
    fb: np.ndarray
    sign: np.ndarray
    pref: np.ndarray

    @classmethod
    def build(cls, labeled: Sequence[tuple[ResponsePair, Outcome]], extractor: str = DEFAULT_EXTRACTOR) -> "TrainingProblem":
        pairs = [p for p, _ in labeled]
        fa, fb = feature_matrices(pairs, extractor)
        outcomes = [Outcome(o) for _, o in labeled]
        sign = np.array([1.0 if o is Outcome.A_WINS else -1.0 for o in outcomes])
        pref = np.array([o is not Outcome.TIE for o in outcomes])
        return cls(fa, fb, sign, pref)


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def objective(scorer: PairwiseScorer, data: TrainingProblem, lambda_swap: float) -> tuple[float, float, float]:
    """(total, preference term, swap term) of the training objective.

    The swap term is evaluated on the batch augmented with every pair's
    swapped twin.
    """
    delta = data.fa - data.fb
    w = scorer.weights
    s = data.sign * (delta @ w)
    u = np.zeros(len(delta))
    if scorer.has_position_terms:
        u = (data.fa + data.fb) @ scorer.position_weights + scorer.position_bias
        s = s + u
    pref = float(np.mean(_softplus(-s[data.pref])))
    # For the pair and its twin, d(a,b) + d(b,a) = 2u in both orders.
    augmented = np.concatenate([2.0 * u, 2.0 * u])
    swap = float(np.mean(augmented**2))
    return pref + lambda_swap * swap, pref, swap


def objective_gradient(scorer: PairwiseScorer, data: TrainingProblem, lambda_swap: float) -> np.ndarray:
    """Analytic gradient of :func:`objective` with respect to ``scorer.params()``."""
    delta = data.fa - data.fb
    s = data.sign * (delta @ scorer.weights)
    if scorer.has_position_terms:
        total = data.fa + data.fb
        u = total @ scorer.position_weights + scorer.position_bias
        s = s + u
    m = int(data.pref.sum())
    coef = -_sigmoid(-s) * data.pref / m
    g_w = (coef * data.sign) @ delta
    if not scorer.has_position_terms:
        return g_w
    n = len(delta)
    g_p = coef @ total + lambda_swap * (8.0 / n) * (u @ total)
    g_b = coef.sum() + lambda_swap * (8.0 / n) * u.sum()
    return np.concatenate([g_w, g_p, [g_b]])


@dataclass
class TrainingResult:
    scorer: PairwiseScorer
    loss_curve: list[float]
    accuracy: float


def preference_accuracy(scorer: PairwiseScorer, data: TrainingProblem) -> float:
    s = data.sign * ((data.fa - data.fb) @ scorer.weights)
    if scorer.has_position_terms:
        s = s + (data.fa + data.fb) @ scorer.position_weights + scorer.position_bias
    return float(np.mean(s[data.pref] > 0))


def train_pairwise_scorer(
    labeled: Sequence[tuple[ResponsePair, Outcome | str]],
    config: TrainConfig | None = None,
    *,
    data: TrainingProblem | None = None,
) -> TrainingResult:
    """Full-batch gradient descent from zero on logistic + swap-consistency loss.

    ``loss_curve[e]`` is the objective before the update of epoch ``e``,
    with the final objective appended.  Five consecutive increases raise
    :class:`DivergenceDetected`.
    """
    config = config or TrainConfig()
    if not labeled and data is None:
        raise EmptyAfterTieFiltering("no labeled pairs")
    if data is None:
        labeled = list(labeled)
        random.Random(config.seed).shuffle(labeled)
        data = TrainingProblem.build(labeled, config.extractor)
    if not data.pref.any():
        raise EmptyAfterTieFiltering("every labeled pair is a tie")

    scorer = PairwiseScorer.zeros(config.extractor, config.position_terms)
    if data.fa.shape[1] != scorer.feature_dim:
        scorer = PairwiseScorer(
            data.fa.shape[1],
            np.zeros(data.fa.shape[1]),
            config.extractor,
            np.zeros(data.fa.shape[1]) if config.position_terms else None,
        )
    theta = scorer.params()
    curve: list[float] = []
    rises = 0
    for _ in range(config.epochs):
        loss = objective(scorer, data, config.lambda_swap)[0]
        if not math.isfinite(loss):
            raise DivergenceDetected("objective became non-finite")
        if curve and loss > curve[-1]:
            rises += 1
            if rises >= 5:
                raise DivergenceDetected("objective increased for 5 consecutive epochs")
        else:
            rises = 0
        curve.append(loss)
        theta = theta - config.learning_rate * objective_gradient(scorer, data, config.lambda_swap)
        scorer = scorer.with_params(theta)
    curve.append(objective(scorer, data, config.lambda_swap)[0])
    return TrainingResult(scorer, curve, preference_accuracy(scorer, data))


def load_labeled(path: str | Path) -> list[tuple[ResponsePair, Outcome]]:
    """Read a line-delimited labeled-pair dataset."""
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        try:
            pair = ResponsePair(rec.get("context", ""), rec["response_a"], rec["response_b"])
            out.append((pair, Outcome(rec["outcome"])))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad labeled pair ({exc})") from None
    return out
