"""Scikit-learn style wrappers: fit on text pairs, transform clean text.

Both estimators take and return plain strings so they slot into sklearn
pipelines ahead of a vectorizer.  Hyperparameters follow the sklearn
convention (stored verbatim in ``__init__``, validated at fit/transform
time) so ``get_params``, ``set_params``, and ``clone`` work as usual.
"""

from __future__ import annotations

from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .matrix import build_matrix
from .simulate import (
    AdjustmentPlan,
    estimate_raw_wer,
    simulate_pass,
    uniform_simulate,
)
from .text import CorpusEntry, Utterance, tokenize

__all__ = ["ConfusionMatrixNoiser", "UniformNoiser"]


def _as_utterances(texts: Iterable[str], case_fold: bool) -> list[Utterance]:
    return [Utterance(tuple(tokenize(text, case_fold))) for text in texts]


class ConfusionMatrixNoiser(BaseEstimator, TransformerMixin):
    """Learn recognition confusions from (reference, hypothesis) pairs and
    inject matching errors into new text.

    Parameters
    ----------
    max_ngram : longest phrase length learned as a confusion key.
    target_wer : overall WER to steer simulated output toward, or None
        to reproduce the fitted error rate as-is.
    correct_cap : ceiling (< 1) on any phrase's adjusted probability of
        being left intact when steering toward ``target_wer``.
    raw_wer_passes : Monte Carlo passes used to estimate the unadjusted
        WER before steering.
    seed : master seed; transforms are deterministic given it.
    case_fold : lowercase all text before learning and transforming.

    Attributes
    ----------
    matrix_ : the fitted confusion matrix.
    """

    def __init__(
        self,
        max_ngram: int = 3,
        target_wer: float | None = None,
        correct_cap: float = 0.98,
        raw_wer_passes: int = 10,
        seed: int = 0,
        case_fold: bool = True,
    ):
        self.max_ngram = max_ngram
        self.target_wer = target_wer
        self.correct_cap = correct_cap
        self.raw_wer_passes = raw_wer_passes
        self.seed = seed
        self.case_fold = case_fold

    def fit(self, X: Iterable[tuple[str, str]], y=None):
        """Fit on an iterable of (reference text, recognized text) pairs."""
        entries = []
        for ref, hyp in X:
            entries.append(
                CorpusEntry(
                    reference=Utterance(tuple(tokenize(ref, self.case_fold))),
                    hypothesis=Utterance(tuple(tokenize(hyp, self.case_fold))),
                )
            )
        self.matrix_ = build_matrix(entries, self.max_ngram)
        return self

    def transform(self, X: Iterable[str]) -> list[str]:
        """Return one noisy rendering of each input text."""
        check_is_fitted(self, "matrix_")
        refs = _as_utterances(X, self.case_fold)
        if not refs:
            return []
        plan = None
        if self.target_wer is not None:
            raw = estimate_raw_wer(self.matrix_, refs, self.raw_wer_passes, self.seed)
            plan = AdjustmentPlan(raw, self.target_wer, self.correct_cap)
        entries = simulate_pass(self.matrix_, refs, plan, self.seed)
        return [entry.hypothesis.text() for entry in entries]


class UniformNoiser(BaseEstimator, TransformerMixin):
    """Baseline noiser: per-token substitutions drawn uniformly from the
    vocabulary seen during fit, at rate ``wer``.  Never inserts or deletes.
    """

    def __init__(self, wer: float = 0.0, seed: int = 0, case_fold: bool = True):
        self.wer = wer
        self.seed = seed
        self.case_fold = case_fold

    def fit(self, X: Iterable[str], y=None):
        """Collect the replacement vocabulary from an iterable of texts."""
        vocab: set[str] = set()
        for text in X:
            vocab.update(tokenize(text, self.case_fold))
        self.vocabulary_ = frozenset(vocab)
        return self

    def transform(self, X: Iterable[str]) -> list[str]:
        """Return each input text with tokens substituted at rate ``wer``."""
        check_is_fitted(self, "vocabulary_")
        refs = _as_utterances(X, self.case_fold)
        entries = uniform_simulate(self.vocabulary_, refs, self.wer, self.seed)
        return [entry.hypothesis.text() for entry in entries]
