"""N-gram confusion matrix: construction, per-key statistics, serialization.

The matrix maps source n-grams (1 <= n <= ``max_n``) of reference text to
the phrases a recognizer produced for them, weighted by occurrence count.
A key's *self* entry (target identical to the source) records correct
recognitions; an empty target records a deletion.

Construction walks every aligned sentence pair, cuts the alignment into
segments, and counts every window of consecutive segments whose reference
side is at most ``max_n`` words long.  Windows never split an error
segment internally, so multi-word confusions are stored as units.
"""

from __future__ import annotations

import json
from typing import Iterator, Mapping, NamedTuple, Sequence

from .alignment import Alignment, EditKind, align
from .text import CorpusEntry, is_valid_token

__all__ = [
    "Phrase",
    "AlignedSegment",
    "KeyStats",
    "ConfusionMatrix",
    "MatrixFormatError",
    "segment_alignment",
    "build_matrix",
]

Phrase = tuple[str, ...]

MATRIX_FORMAT_VERSION = 1


class MatrixFormatError(ValueError):
    """Raised when serialized matrix data is malformed or inconsistent."""


class AlignedSegment(NamedTuple):
    ref: Phrase
    hyp: Phrase


class KeyStats(NamedTuple):
    correct_weight: float
    total_weight: float
    wer: float


def segment_alignment(alignment: Alignment) -> list[AlignedSegment]:
    """Cut an alignment into (reference phrase, hypothesis phrase) segments.

    Each match op is its own unit segment.  A maximal run of non-match ops
    containing a substitution or deletion becomes one error segment.  A run
    of pure insertions extends the hypothesis side of the segment before it
    (or after it, at sentence start); an all-insertions alignment yields a
    single segment with an empty reference side.

    Concatenating the segments' ref sides reproduces the reference, and
    their hyp sides the hypothesis.
    """
    segments: list[AlignedSegment] = []
    pending_hyp: list[str] = []  # sentence-initial insertions awaiting a home
    run_ref: list[str] = []
    run_hyp: list[str] = []
    run_has_error = False

    def flush_run() -> None:
        nonlocal run_ref, run_hyp, run_has_error
        if not run_ref and not run_hyp:
            return
        if run_has_error:
            emit(tuple(run_ref), tuple(run_hyp))
        elif segments:
            prev = segments[-1]
            segments[-1] = AlignedSegment(prev.ref, prev.hyp + tuple(run_hyp))
        else:
            pending_hyp.extend(run_hyp)
        run_ref, run_hyp, run_has_error = [], [], False

    def emit(ref: Phrase, hyp: Phrase) -> None:
        if pending_hyp:
            hyp = tuple(pending_hyp) + hyp
            pending_hyp.clear()
        segments.append(AlignedSegment(ref, hyp))

    for op in alignment.ops:
        if op.kind is EditKind.MATCH:
            flush_run()
            emit((op.ref,), (op.hyp,))
        else:
            if op.ref is not None:
                run_ref.append(op.ref)
                run_has_error = True
            if op.hyp is not None:
                run_hyp.append(op.hyp)
    flush_run()
    if pending_hyp:
        # alignment was all insertions
        segments.append(AlignedSegment((), tuple(pending_hyp)))
    return segments


class ConfusionMatrix:
    """Immutable map from source phrases to weighted replacement phrases.

    ``entries`` maps each source phrase to a mapping of replacement phrase
    to non-negative weight; per key the weights must sum to a positive
    value.  Replacement order is canonicalized (sorted) so that sampling
    and serialization are reproducible regardless of construction order.
    """

    __slots__ = ("_max_n", "_confusions", "_stats")

    def __init__(self, max_n: int, entries: Mapping[Phrase, Mapping[Phrase, float]]):
        if max_n < 1:
            raise ValueError(f"max_n must be >= 1, got {max_n}")
        self._max_n = int(max_n)
        self._confusions: dict[Phrase, tuple[tuple[Phrase, float], ...]] = {}
        self._stats: dict[Phrase, KeyStats] = {}
        for source, targets in entries.items():
            self._validate_phrase(source, is_source=True)
            if not targets:
                raise ValueError(f"key {source!r} has no confusion entries")
            total = 0.0
            correct = 0.0
            clean: list[tuple[Phrase, float]] = []
            for target, weight in targets.items():
                self._validate_phrase(target, is_source=False)
                w = float(weight)
                if not w >= 0.0:
                    raise ValueError(f"negative or NaN weight for {source!r} -> {target!r}")
                clean.append((tuple(target), w))
                total += w
                if tuple(target) == tuple(source):
                    correct = w
            if total <= 0.0:
                raise ValueError(f"key {source!r} has zero total weight")
            clean.sort(key=lambda tw: tw[0])
            self._confusions[tuple(source)] = tuple(clean)
            self._stats[tuple(source)] = KeyStats(correct, total, 1.0 - correct / total)

    def _validate_phrase(self, phrase: Sequence[str], is_source: bool) -> None:
        if is_source and not (1 <= len(phrase) <= self._max_n):
            raise ValueError(
                f"source phrase {tuple(phrase)!r} has length outside [1, {self._max_n}]"
            )
        for token in phrase:
            if not is_valid_token(token):
                raise ValueError(f"invalid token {token!r} in phrase {tuple(phrase)!r}")

    @property
    def max_n(self) -> int:
        return self._max_n

    @property
    def vocabulary(self) -> frozenset[str]:
        """All tokens appearing as unigram keys."""
        return frozenset(key[0] for key in self._confusions if len(key) == 1)

    def __contains__(self, key: Phrase) -> bool:
        return tuple(key) in self._confusions

    def __len__(self) -> int:
        return len(self._confusions)

    def keys(self) -> Iterator[Phrase]:
        return iter(self._confusions)

    def confusions(self, key: Phrase) -> tuple[tuple[Phrase, float], ...]:
        """The key's (replacement, weight) pairs in canonical order."""
        try:
            return self._confusions[tuple(key)]
        except KeyError:
            raise KeyError(f"phrase {tuple(key)!r} is not in the matrix") from None

    def individual_stats(self, key: Phrase) -> KeyStats:
        """Correct-recognition weight, total weight, and the key's own WER.

        The key's WER is ``1 - correct/total``: its probability of being
        replaced by anything other than itself under raw sampling.
        """
        try:
            return self._stats[tuple(key)]
        except KeyError:
            raise KeyError(f"phrase {tuple(key)!r} is not in the matrix") from None

    def prune(self, min_weight: float) -> "ConfusionMatrix":
        """Copy without confusions weighing less than ``min_weight``.

        Keys left with no confusions at all are dropped.
        """
        kept: dict[Phrase, dict[Phrase, float]] = {}
        for key, pairs in self._confusions.items():
            targets = {t: w for t, w in pairs if w >= min_weight}
            if targets:
                kept[key] = targets
        return ConfusionMatrix(self._max_n, kept)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self._max_n == other._max_n and self._confusions == other._confusions

    def __repr__(self) -> str:
        return f"ConfusionMatrix(max_n={self._max_n}, keys={len(self._confusions)})"

    def dumps(self) -> str:
        """Serialize to the versioned JSON format (full float precision)."""
        payload = {
            "version": MATRIX_FORMAT_VERSION,
            "max_n": self._max_n,
            "entries": [
                {
                    "source": list(source),
                    "confusions": [
                        {"target": list(target), "weight": weight}
                        for target, weight in pairs
                    ],
                }
                for source, pairs in sorted(self._confusions.items())
            ],
        }
        return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def loads(cls, data: str | bytes) -> "ConfusionMatrix":
        """Parse the JSON format; validates version and all invariants."""
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        try:
            payload = json.loads(data)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON: {exc.msg}") from exc
        if not isinstance(payload, dict):
            raise MatrixFormatError("expected a JSON object")
        version = payload.get("version")
        if version != MATRIX_FORMAT_VERSION:
            raise MatrixFormatError(
                f"unsupported matrix format version {version!r} "
                f"(expected {MATRIX_FORMAT_VERSION})"
            )
        max_n = payload.get("max_n")
        if not isinstance(max_n, int):
            raise MatrixFormatError("max_n must be an integer")
        raw_entries = payload.get("entries")
        if not isinstance(raw_entries, list):
            raise MatrixFormatError("entries must be an array")
        entries: dict[Phrase, dict[Phrase, float]] = {}
        for item in raw_entries:
            source, confusions = cls._parse_entry(item)
            if source in entries:
                raise MatrixFormatError(f"duplicate source {source!r}")
            entries[source] = confusions
        try:
            return cls(max_n, entries)
        except ValueError as exc:
            raise MatrixFormatError(str(exc)) from exc

    @staticmethod
    def _parse_entry(item: object) -> tuple[Phrase, dict[Phrase, float]]:
        if not isinstance(item, dict):
            raise MatrixFormatError("each entry must be an object")
        source = item.get("source")
        if not isinstance(source, list) or not all(isinstance(t, str) for t in source):
            raise MatrixFormatError("source must be an array of strings")
        raw = item.get("confusions")
        if not isinstance(raw, list):
            raise MatrixFormatError(f"confusions of {source!r} must be an array")
        confusions: dict[Phrase, float] = {}
        for conf in raw:
            if not isinstance(conf, dict):
                raise MatrixFormatError(f"bad confusion entry under {source!r}")
            target = conf.get("target")
            weight = conf.get("weight")
            if not isinstance(target, list) or not all(isinstance(t, str) for t in target):
                raise MatrixFormatError(f"target under {source!r} must be an array of strings")
            if not isinstance(weight, (int, float)) or isinstance(weight, bool):
                raise MatrixFormatError(f"weight under {source!r} must be a number")
            key = tuple(target)
            if key in confusions:
                raise MatrixFormatError(f"duplicate target {key!r} under {source!r}")
            confusions[key] = float(weight)
        return tuple(source), confusions


def build_matrix(entries: Sequence[CorpusEntry], max_n: int) -> ConfusionMatrix:
    """Learn a confusion matrix from aligned (reference, hypothesis) pairs.

    Every window of consecutive alignment segments whose reference side
    totals between 1 and ``max_n`` words contributes weight 1 to the
    (window reference -> window hypothesis) cell, so match-only windows
    accumulate self-confusions.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    if not entries:
        raise ValueError("cannot build a confusion matrix from an empty corpus")
    counts: dict[Phrase, dict[Phrase, float]] = {}
    for idx, entry in enumerate(entries):
        if entry.hypothesis is None:
            raise ValueError(f"entry {idx} has no hypothesis")
        segments = segment_alignment(
            align(entry.reference.tokens, entry.hypothesis.tokens)
        )
        for start in range(len(segments)):
            ref_len = 0
            ref_parts: list[str] = []
            hyp_parts: list[str] = []
            for seg in segments[start:]:
                ref_len += len(seg.ref)
                if ref_len > max_n:
                    break
                ref_parts.extend(seg.ref)
                hyp_parts.extend(seg.hyp)
                if ref_len >= 1:
                    key = tuple(ref_parts)
                    targets = counts.setdefault(key, {})
                    target = tuple(hyp_parts)
                    targets[target] = targets.get(target, 0.0) + 1.0
    return ConfusionMatrix(max_n, counts)
