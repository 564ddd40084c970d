"""Word-level minimum-edit-distance alignment and corpus error statistics.

Alignment uses unit costs (1 each for substitution, insertion, deletion).
Among cost ties the backtrace is deterministic: at every cell it prefers
match, then substitution, then deletion, then insertion, so repeated runs
produce identical edit scripts on any platform.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .text import CorpusEntry

__all__ = [
    "EditKind",
    "EditOp",
    "Alignment",
    "ErrorStats",
    "align",
    "error_stats",
]


class EditKind(enum.Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    INSERT = "insert"
    DELETE = "delete"


class EditOp(NamedTuple):
    kind: EditKind
    ref: str | None
    hyp: str | None


@dataclass(frozen=True)
class Alignment:
    """An edit script turning the reference into the hypothesis."""

    ops: tuple[EditOp, ...]
    distance: int

    def ref_tokens(self) -> list[str]:
        return [op.ref for op in self.ops if op.ref is not None]

    def hyp_tokens(self) -> list[str]:
        return [op.hyp for op in self.ops if op.hyp is not None]


def align(ref: Sequence[str], hyp: Sequence[str]) -> Alignment:
    """Minimum-edit-distance alignment of two token sequences.

    Either side may be empty.  The returned op sequence reproduces the
    reference on its ref side and the hypothesis on its hyp side, and its
    non-match count equals the Levenshtein distance.
    """
    n, m = len(ref), len(hyp)
    rows: list[list[int]] = [list(range(m + 1))]
    for i in range(1, n + 1):
        prev = rows[i - 1]
        cur = [i] + [0] * m
        ri = ref[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (ri != hyp[j - 1])
            up = prev[j] + 1
            if up < best:
                best = up
            left = cur[j - 1] + 1
            if left < best:
                best = left
            cur[j] = best
        rows.append(cur)

    ops: list[EditOp] = []
    i, j = n, m
    while i > 0 or j > 0:
        here = rows[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and here == rows[i - 1][j - 1]:
            ops.append(EditOp(EditKind.MATCH, ref[i - 1], hyp[j - 1]))
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and here == rows[i - 1][j - 1] + 1 and ref[i - 1] != hyp[j - 1]:
            ops.append(EditOp(EditKind.SUBSTITUTE, ref[i - 1], hyp[j - 1]))
            i -= 1
            j -= 1
        elif i > 0 and here == rows[i - 1][j] + 1:
            ops.append(EditOp(EditKind.DELETE, ref[i - 1], None))
            i -= 1
        else:
            ops.append(EditOp(EditKind.INSERT, None, hyp[j - 1]))
            j -= 1
    ops.reverse()
    return Alignment(ops=tuple(ops), distance=rows[n][m])


@dataclass(frozen=True)
class ErrorStats:
    """Aggregate error counts and rates over a scored corpus.

    ``wer`` uses the reference word count as denominator and may exceed 1
    (insertions are unbounded).  The error-type fractions are shares of the
    total error count; all three are 0 when the corpus has no errors.
    ``perfect_fraction`` is the share of entries aligned with distance 0.
    """

    ref_word_count: int
    substitutions: int
    insertions: int
    deletions: int
    wer: float
    sub_frac: float
    ins_frac: float
    del_frac: float
    perfect_fraction: float

    @classmethod
    def from_counts(
        cls,
        ref_word_count: int,
        substitutions: int,
        insertions: int,
        deletions: int,
        perfect_entries: int,
        total_entries: int,
    ) -> "ErrorStats":
        errors = substitutions + insertions + deletions
        return cls(
            ref_word_count=ref_word_count,
            substitutions=substitutions,
            insertions=insertions,
            deletions=deletions,
            wer=errors / ref_word_count,
            sub_frac=substitutions / errors if errors else 0.0,
            ins_frac=insertions / errors if errors else 0.0,
            del_frac=deletions / errors if errors else 0.0,
            perfect_fraction=perfect_entries / total_entries,
        )


def error_stats(entries: Sequence[CorpusEntry]) -> ErrorStats:
    """Align every entry and aggregate word-error statistics.

    Every entry must carry a hypothesis, and the entries must contain at
    least one reference word in total.
    """
    if not entries:
        raise ValueError("cannot compute error statistics of an empty corpus")
    subs = ins = dels = ref_words = perfect = 0
    for idx, entry in enumerate(entries):
        if entry.hypothesis is None:
            raise ValueError(f"entry {idx} has no hypothesis")
        a = align(entry.reference.tokens, entry.hypothesis.tokens)
        ref_words += len(entry.reference.tokens)
        if a.distance == 0:
            perfect += 1
        for op in a.ops:
            if op.kind is EditKind.SUBSTITUTE:
                subs += 1
            elif op.kind is EditKind.INSERT:
                ins += 1
            elif op.kind is EditKind.DELETE:
                dels += 1
    if ref_words == 0:
        raise ValueError("corpus has no reference words")
    return ErrorStats.from_counts(ref_words, subs, ins, dels, perfect, len(entries))
