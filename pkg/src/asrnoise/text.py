"""Tokenization, utterance/corpus data model, and corpus file I/O.

Corpora are sequences of entries pairing a reference sentence with an
optional recognizer hypothesis and an optional set of labels.  Two file
formats are supported:

* JSONL: one object per line with fields ``ref`` (required string),
  ``hyp`` (optional string) and ``labels`` (optional array of strings).
* TSV: columns ``ref<TAB>hyp<TAB>labels`` with labels semicolon-separated;
  trailing columns may be omitted or left empty.

JSONL distinguishes an *empty* hypothesis (``"hyp": ""``, a full deletion)
from an *absent* one (no ``hyp`` field).  TSV cannot: an empty hypothesis
column reads back as "no hypothesis".  Use JSONL when the distinction
matters.
"""

from __future__ import annotations

import io
import json
import unicodedata
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

__all__ = [
    "Utterance",
    "CorpusEntry",
    "CorpusFormatError",
    "tokenize",
    "read_corpus",
    "write_corpus",
]

FORMATS = ("jsonl", "tsv")


class CorpusFormatError(ValueError):
    """A corpus line that cannot be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass(frozen=True)
class Utterance:
    """A tokenized sentence, optionally carrying classification labels."""

    tokens: tuple[str, ...]
    labels: frozenset[str] | None = None

    def text(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class CorpusEntry:
    """A reference sentence with an optional recognizer hypothesis."""

    reference: Utterance
    hypothesis: Utterance | None = None
    labels: frozenset[str] | None = None


def tokenize(text: str, case_fold: bool = True) -> list[str]:
    """Split ``text`` into word tokens.

    Applies Unicode NFC normalization, splits on runs of Unicode
    whitespace, and lowercases each token when ``case_fold`` is true.
    Total: any string, including the empty one, tokenizes.
    """
    tokens = unicodedata.normalize("NFC", text).split()
    if case_fold:
        # re-normalize: lowercasing can denormalize exotic code points
        tokens = [unicodedata.normalize("NFC", t.lower()) for t in tokens]
    return tokens


def is_valid_token(token: object) -> bool:
    """True for a non-empty string containing no whitespace."""
    return (
        isinstance(token, str)
        and bool(token)
        and not any(ch.isspace() for ch in token)
    )


def _labels_or_none(raw: Iterable[str] | None) -> frozenset[str] | None:
    if raw is None:
        return None
    return frozenset(raw)


def _entry_from_jsonl(line: str, line_no: int, case_fold: bool) -> CorpusEntry:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(line_no, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise CorpusFormatError(line_no, "expected a JSON object")
    ref = obj.get("ref")
    if ref is None:
        raise CorpusFormatError(line_no, "missing ref")
    if not isinstance(ref, str):
        raise CorpusFormatError(line_no, "ref must be a string")
    hyp = obj.get("hyp")
    if hyp is not None and not isinstance(hyp, str):
        raise CorpusFormatError(line_no, "hyp must be a string")
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise CorpusFormatError(line_no, "labels must be an array of strings")
    return CorpusEntry(
        reference=Utterance(tuple(tokenize(ref, case_fold))),
        hypothesis=None if hyp is None else Utterance(tuple(tokenize(hyp, case_fold))),
        labels=_labels_or_none(labels),
    )


def _entry_from_tsv(line: str, line_no: int, case_fold: bool) -> CorpusEntry:
    cols = line.split("\t")
    if len(cols) > 3:
        raise CorpusFormatError(line_no, f"expected at most 3 columns, got {len(cols)}")
    ref = cols[0]
    hyp = cols[1] if len(cols) > 1 else ""
    raw_labels = cols[2] if len(cols) > 2 else ""
    labels = [x for x in raw_labels.split(";") if x] if raw_labels else None
    return CorpusEntry(
        reference=Utterance(tuple(tokenize(ref, case_fold))),
        # TSV cannot distinguish an empty hypothesis from a missing one
        hypothesis=Utterance(tuple(tokenize(hyp, case_fold))) if hyp else None,
        labels=_labels_or_none(labels),
    )


def read_corpus(
    stream: IO[bytes] | IO[str],
    format: str = "jsonl",
    case_fold: bool = True,
) -> list[CorpusEntry]:
    """Parse a corpus file into entries, one per non-blank line.

    Raises :class:`CorpusFormatError` (with the offending 1-based line
    number) on malformed lines.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}")
    entries = []
    for line_no, raw in enumerate(_text_lines(stream), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if format == "jsonl":
            entries.append(_entry_from_jsonl(line, line_no, case_fold))
        else:
            entries.append(_entry_from_tsv(line, line_no, case_fold))
    return entries


def _is_binary(stream: IO[bytes] | IO[str]) -> bool:
    return isinstance(stream, (io.RawIOBase, io.BufferedIOBase))


def _text_lines(stream: IO[bytes] | IO[str]) -> Iterator[str]:
    if _is_binary(stream):
        yield from io.TextIOWrapper(stream, encoding="utf-8")
    else:
        yield from stream


def entry_to_jsonl(entry: CorpusEntry) -> str:
    obj: dict = {"ref": entry.reference.text()}
    if entry.hypothesis is not None:
        obj["hyp"] = entry.hypothesis.text()
    if entry.labels is not None:
        obj["labels"] = sorted(entry.labels)
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def entry_to_tsv(entry: CorpusEntry) -> str:
    hyp = entry.hypothesis.text() if entry.hypothesis is not None else ""
    labels = ";".join(sorted(entry.labels)) if entry.labels is not None else ""
    return "\t".join((entry.reference.text(), hyp, labels))


def write_corpus(
    entries: Iterable[CorpusEntry],
    stream: IO[bytes] | IO[str],
    format: str = "jsonl",
) -> None:
    """Serialize entries, one per line, LF-terminated, UTF-8."""
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}")
    render = entry_to_jsonl if format == "jsonl" else entry_to_tsv
    out = stream
    wrapper = None
    if _is_binary(stream):
        wrapper = io.TextIOWrapper(stream, encoding="utf-8", newline="\n")
        out = wrapper
    for entry in entries:
        out.write(render(entry))
        out.write("\n")
    if wrapper is not None:
        wrapper.flush()
        wrapper.detach()
