"""Micro-averaged multi-label scoring for dialog-act style predictions."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .text import CorpusFormatError

__all__ = [
    "LabeledPrediction",
    "multilabel_accuracy",
    "micro_f1",
    "read_predictions",
]


@dataclass(frozen=True)
class LabeledPrediction:
    gold: frozenset[str]
    predicted: frozenset[str]


def _pooled_counts(rows: Iterable[LabeledPrediction]) -> tuple[int, int, int]:
    tp = fp = fn = 0
    for row in rows:
        tp += len(row.gold & row.predicted)
        fp += len(row.predicted - row.gold)
        fn += len(row.gold - row.predicted)
    return tp, fp, fn


def multilabel_accuracy(rows: Sequence[LabeledPrediction]) -> float:
    """TP / (TP + FP + FN) over label instances pooled across all rows.

    A row with gold == predicted contributes only true positives; each
    spurious label costs one FP and each missed label one FN.
    """
    tp, fp, fn = _pooled_counts(rows)
    if tp + fp + fn == 0:
        raise ValueError("no labels anywhere; accuracy undefined")
    return tp / (tp + fp + fn)


def micro_f1(rows: Sequence[LabeledPrediction]) -> float:
    """Micro-averaged F1 = 2TP / (2TP + FP + FN) over pooled label instances."""
    tp, fp, fn = _pooled_counts(rows)
    if tp + fp + fn == 0:
        raise ValueError("no labels anywhere; F1 undefined")
    return 2 * tp / (2 * tp + fp + fn)


def read_predictions(stream: IO) -> list[LabeledPrediction]:
    """Parse JSONL rows of {"gold": [...], "pred": [...]} label arrays."""
    rows = []
    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(line_no, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise CorpusFormatError(line_no, "expected a JSON object")
        rows.append(
            LabeledPrediction(
                gold=_label_set(obj, "gold", line_no),
                predicted=_label_set(obj, "pred", line_no),
            )
        )
    return rows


def _label_set(obj: dict, field: str, line_no: int) -> frozenset[str]:
    value = obj.get(field)
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise CorpusFormatError(line_no, f"field {field!r} must be an array of strings")
    return frozenset(value)
