"""Recognition-error simulation with optional overall-WER targeting.

A reference sentence is partitioned greedily (longest match first) into
phrases that exist as confusion-matrix keys; each phrase is replaced by a
confusion sampled proportionally to its stored weights, so simulated
output follows the error distribution of the corpus the matrix was
learned from.

To hit a different overall WER, each key's correct-recognition weight is
shifted at sampling time: the key's correct-recognition probability is
rescaled by (1 - target overall WER) / (1 - raw overall WER), capped
below 1, and the weight delta that realizes the rescaled probability is
added to the key's self entry.  The stored matrix is never mutated, so
one matrix can serve many targets.  The raw overall WER is measured by
Monte Carlo: a few unadjusted simulation passes over the references,
scored against them.

Randomness is reproducible: every utterance (and, for the uniform
simulator, every token) gets its own generator seeded by a fixed 64-bit
mix of the master seed and the item's index, making output independent
of evaluation order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .alignment import ErrorStats, error_stats
from .matrix import ConfusionMatrix, Phrase
from .text import CorpusEntry, Utterance

__all__ = [
    "AdjustmentPlan",
    "SimulationConfig",
    "PartitionPiece",
    "partition",
    "adjustment_delta",
    "estimate_raw_wer",
    "simulate_utterance",
    "simulate_pass",
    "simulate_corpus",
    "uniform_simulate",
]

_MASK64 = (1 << 64) - 1

# disjoint stream tags so derived seeds never collide across purposes
_STREAM_SIMULATE = 0x51
_STREAM_RAW_PASS = 0x52
_STREAM_UNIFORM = 0x53


def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed (splitmix64 finalizer per part).

    Stable across platforms and Python versions; used to derive
    per-utterance and per-token generator seeds from a master seed.
    """
    acc = 0x243F6A8885A308D3
    for part in parts:
        acc = (acc + (part & _MASK64) + 0x9E3779B97F4A7C15) & _MASK64
        acc = ((acc ^ (acc >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        acc = ((acc ^ (acc >> 27)) * 0x94D049BB133111EB) & _MASK64
        acc = acc ^ (acc >> 31)
    return acc


@dataclass(frozen=True)
class AdjustmentPlan:
    """Per-key WER adjustment parameters.

    ``raw_wer`` is the overall WER of unadjusted sampling, ``target_wer``
    the desired overall WER, and ``correct_cap`` the upper bound (< 1) on
    any key's adjusted correct-recognition probability.
    """

    raw_wer: float
    target_wer: float
    correct_cap: float = 0.98

    def __post_init__(self) -> None:
        if not 0.0 <= self.raw_wer < 1.0:
            raise ValueError(f"raw_wer must be in [0, 1), got {self.raw_wer}")
        if not 0.0 <= self.target_wer < 1.0:
            raise ValueError(f"target_wer must be in [0, 1), got {self.target_wer}")
        if not 0.0 < self.correct_cap < 1.0:
            raise ValueError(f"correct_cap must be in (0, 1), got {self.correct_cap}")


@dataclass(frozen=True)
class SimulationConfig:
    """Knobs for :func:`simulate_corpus`.

    ``target_wer`` of ``None`` means raw sampling with no adjustment.
    ``raw_wer_passes`` controls how many unadjusted passes estimate the
    raw WER before adjusting.
    """

    target_wer: float | None = None
    correct_cap: float = 0.98
    raw_wer_passes: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.target_wer is not None and not 0.0 <= self.target_wer < 1.0:
            raise ValueError(f"target_wer must be in [0, 1), got {self.target_wer}")
        if not 0.0 < self.correct_cap < 1.0:
            raise ValueError(f"correct_cap must be in (0, 1), got {self.correct_cap}")
        if self.raw_wer_passes < 1:
            raise ValueError(f"raw_wer_passes must be >= 1, got {self.raw_wer_passes}")


class PartitionPiece(NamedTuple):
    tokens: Phrase
    oov: bool


def partition(matrix: ConfusionMatrix, tokens: Sequence[str]) -> list[PartitionPiece]:
    """Greedy longest-match split of a token sequence into matrix keys.

    At each position the longest n-gram (n <= ``matrix.max_n``) present in
    the matrix is taken; a token absent even as a unigram becomes a
    single-token piece flagged out-of-vocabulary.  Concatenating the
    pieces reproduces the input.
    """
    pieces: list[PartitionPiece] = []
    i = 0
    n = len(tokens)
    max_n = matrix.max_n
    while i < n:
        for size in range(min(max_n, n - i), 0, -1):
            candidate = tuple(tokens[i : i + size])
            if candidate in matrix:
                pieces.append(PartitionPiece(candidate, False))
                i += size
                break
        else:
            pieces.append(PartitionPiece((tokens[i],), True))
            i += 1
    return pieces


def adjustment_delta(
    correct_weight: float, total_weight: float, plan: AdjustmentPlan
) -> float:
    """Weight to add to a key's self entry to realize its adjusted WER.

    The key's correct-recognition probability ``correct/total`` is scaled
    by ``(1 - target_wer) / (1 - raw_wer)`` and capped at
    ``plan.correct_cap``, giving the adjusted probability ``h``; the
    returned delta ``x`` satisfies ``(correct + x) / (total + x) == h``;
    it is negative when the target WER exceeds the raw WER.
    """
    if not total_weight > 0.0:
        raise ValueError(f"total_weight must be positive, got {total_weight}")
    if not 0.0 <= correct_weight <= total_weight:
        raise ValueError(
            f"correct_weight must be in [0, total_weight], got {correct_weight}"
        )
    ratio = correct_weight / total_weight
    h = min(ratio * (1.0 - plan.target_wer) / (1.0 - plan.raw_wer), plan.correct_cap)
    return (h * total_weight - correct_weight) / (1.0 - h)


def _weighted_choice(
    rng: random.Random, pairs: Iterable[tuple[Phrase, float]], total: float
) -> Phrase | None:
    point = rng.random() * total
    acc = 0.0
    last = None
    for item, weight in pairs:
        if weight <= 0.0:
            continue
        last = item
        acc += weight
        if point < acc:
            return item
    return last  # float round-off pushed point to the top edge


def simulate_utterance(
    matrix: ConfusionMatrix,
    ref: Utterance,
    plan: AdjustmentPlan | None,
    rng: random.Random,
) -> Utterance:
    """Sample one simulated hypothesis for ``ref``.

    Out-of-vocabulary pieces pass through unchanged.  With a plan, each
    key's self weight is shifted by :func:`adjustment_delta` before
    sampling; a key that was only ever seen recognized correctly has no
    confusion to sample and always passes through.  Labels are copied
    from the reference.
    """
    out: list[str] = []
    for piece in partition(matrix, ref.tokens):
        if piece.oov:
            out.extend(piece.tokens)
            continue
        pairs = matrix.confusions(piece.tokens)
        correct, total, _ = matrix.individual_stats(piece.tokens)
        if plan is None:
            choice = _weighted_choice(rng, pairs, total)
        elif correct == total:
            choice = piece.tokens
        else:
            delta = adjustment_delta(correct, total, plan)
            adjusted = []
            adjusted_total = 0.0
            for target, weight in pairs:
                if target == piece.tokens:
                    weight = max(weight + delta, 0.0)
                adjusted.append((target, weight))
                adjusted_total += weight
            choice = _weighted_choice(rng, adjusted, adjusted_total)
        out.extend(choice)
    return Utterance(tuple(out), ref.labels)


def simulate_pass(
    matrix: ConfusionMatrix,
    refs: Sequence[Utterance],
    plan: AdjustmentPlan | None,
    seed: int,
) -> list[CorpusEntry]:
    """One simulation pass over ``refs`` with per-utterance random streams."""
    entries = []
    for index, ref in enumerate(refs):
        rng = random.Random(mix_seed(seed, _STREAM_SIMULATE, index))
        hyp = simulate_utterance(matrix, ref, plan, rng)
        entries.append(CorpusEntry(reference=ref, hypothesis=hyp, labels=ref.labels))
    return entries


def estimate_raw_wer(
    matrix: ConfusionMatrix,
    refs: Sequence[Utterance],
    passes: int,
    seed: int,
) -> float:
    """Mean WER of ``passes`` unadjusted simulation passes over ``refs``."""
    if passes < 1:
        raise ValueError(f"passes must be >= 1, got {passes}")
    if not refs:
        raise ValueError("cannot estimate raw WER of an empty corpus")
    wers = []
    for index in range(passes):
        entries = simulate_pass(matrix, refs, None, mix_seed(seed, _STREAM_RAW_PASS, index))
        wers.append(error_stats(entries).wer)
    return sum(wers) / len(wers)


def simulate_corpus(
    matrix: ConfusionMatrix,
    refs: Sequence[Utterance],
    config: SimulationConfig,
) -> tuple[list[CorpusEntry], ErrorStats]:
    """Simulate a hypothesis for every reference; score the result.

    With ``config.target_wer`` set, the raw WER is first estimated with
    ``config.raw_wer_passes`` unadjusted passes and every sampled key is
    adjusted toward the target.  Fully deterministic given (matrix, refs,
    config).
    """
    if not refs:
        raise ValueError("cannot simulate an empty corpus")
    plan = None
    if config.target_wer is not None:
        raw = estimate_raw_wer(matrix, refs, config.raw_wer_passes, config.seed)
        if raw >= 1.0:
            raise ValueError(
                f"raw WER of the matrix on these references is {raw:.3f}; "
                "WER targeting requires raw WER < 1"
            )
        plan = AdjustmentPlan(raw, config.target_wer, config.correct_cap)
    entries = simulate_pass(matrix, refs, plan, config.seed)
    return entries, error_stats(entries)


def uniform_simulate(
    vocab: Iterable[str],
    refs: Sequence[Utterance],
    wer: float,
    seed: int,
) -> list[CorpusEntry]:
    """Baseline noiser: independent per-token substitutions, no ins/del.

    Each token is replaced with probability ``wer`` by a token drawn
    uniformly from the vocabulary minus itself, so ``wer`` equals the
    expected substitution rate exactly.  Deterministic per (seed,
    utterance index, token index).
    """
    if not 0.0 <= wer < 1.0:
        raise ValueError(f"wer must be in [0, 1), got {wer}")
    words = sorted(set(vocab))
    if wer > 0.0 and len(words) < 2:
        raise ValueError("vocabulary must hold at least 2 tokens when wer > 0")
    position = {word: k for k, word in enumerate(words)}
    entries = []
    for index, ref in enumerate(refs):
        out = []
        for t_index, token in enumerate(ref.tokens):
            rng = random.Random(mix_seed(seed, _STREAM_UNIFORM, index, t_index))
            if wer > 0.0 and rng.random() < wer:
                own = position.get(token)
                if own is None:
                    pick = rng.randrange(len(words))
                else:
                    pick = rng.randrange(len(words) - 1)
                    if pick >= own:
                        pick += 1
                out.append(words[pick])
            else:
                out.append(token)
        hyp = Utterance(tuple(out), ref.labels)
        entries.append(CorpusEntry(reference=ref, hypothesis=hyp, labels=ref.labels))
    return entries
