"""Corpus augmentation recipes and deterministic subsampling.

Two recipes cover the common training setups: "s1" trains on clean
references plus simulated noisy copies, "s2" additionally keeps the
original recognized hypotheses.  Output utterances carry the labels of
the entry they came from, so the result feeds straight into a labeled
training set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .matrix import ConfusionMatrix
from .simulate import SimulationConfig, mix_seed, simulate_corpus, uniform_simulate
from .text import CorpusEntry, Utterance

__all__ = ["Recipe", "augment", "subsample"]

MODES = ("s1", "s2")
SIMULATORS = ("confusion_matrix", "uniform")

_STREAM_AUGMENT = 0x54
_STREAM_SUBSAMPLE = 0x55


@dataclass(frozen=True)
class Recipe:
    """What an augmented corpus is made of.

    One copy of every reference, the original hypotheses when the mode
    keeps them, and one simulated pass per entry of ``target_wers``.
    """

    mode: str
    target_wers: tuple[float, ...] = ()
    simulator: str = "confusion_matrix"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.simulator not in SIMULATORS:
            raise ValueError(
                f"simulator must be one of {SIMULATORS}, got {self.simulator!r}"
            )
        object.__setattr__(self, "target_wers", tuple(self.target_wers))
        for wer in self.target_wers:
            if not 0.0 <= wer < 1.0:
                raise ValueError(f"target WERs must be in [0, 1), got {wer}")

    @property
    def include_original_hyp(self) -> bool:
        return self.mode == "s2"


def augment(
    entries: Sequence[CorpusEntry],
    matrix: ConfusionMatrix | None,
    recipe: Recipe,
) -> list[Utterance]:
    """Expand a corpus per ``recipe`` into a flat list of labeled utterances.

    Order: all references, then (s2 only) all original hypotheses, then
    the simulated passes one target WER at a time.  Each pass draws from
    its own seed stream, so passes differ but the whole result is
    reproducible.  The uniform simulator draws replacements from the
    union of reference tokens.
    """
    if recipe.simulator == "confusion_matrix" and recipe.target_wers and matrix is None:
        raise ValueError("confusion-matrix simulation needs a matrix")
    refs = [Utterance(entry.reference.tokens, entry.labels) for entry in entries]
    out: list[Utterance] = list(refs)
    if recipe.include_original_hyp:
        for index, entry in enumerate(entries):
            if entry.hypothesis is None:
                raise ValueError(f"entry {index} has no hypothesis; mode s2 needs one")
            out.append(Utterance(entry.hypothesis.tokens, entry.labels))
    vocab = None
    if recipe.simulator == "uniform":
        vocab = set()
        for ref in refs:
            vocab.update(ref.tokens)
    for pass_index, wer in enumerate(recipe.target_wers):
        pass_seed = mix_seed(recipe.seed, _STREAM_AUGMENT, pass_index)
        if recipe.simulator == "confusion_matrix":
            config = SimulationConfig(target_wer=wer, seed=pass_seed)
            simulated, _ = simulate_corpus(matrix, refs, config)
        else:
            simulated = uniform_simulate(vocab, refs, wer, pass_seed)
        out.extend(entry.hypothesis for entry in simulated)
    return out


def subsample(
    entries: Sequence[CorpusEntry], fraction: float, seed: int
) -> list[CorpusEntry]:
    """Keep a uniform random fraction of entries, preserving input order.

    The kept count is ``fraction * len(entries)`` rounded half up, so
    small corpora never round down to the empty set for usable fractions.
    """
    if not entries:
        raise ValueError("cannot subsample an empty corpus")
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    count = int(fraction * len(entries) + 0.5)
    rng = random.Random(mix_seed(seed, _STREAM_SUBSAMPLE))
    chosen = sorted(rng.sample(range(len(entries)), count))
    return [entries[index] for index in chosen]
