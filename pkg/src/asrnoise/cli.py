"""Command-line front end.

Exit codes: 0 on success, 1 for usage errors (bad flags or arguments),
2 for data and contract errors (unreadable files, malformed corpora,
out-of-range values).  Machine-readable output goes to stdout or the
--out file; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import IO, Sequence

from .alignment import error_stats
from .augment import MODES, Recipe, augment, subsample
from .matrix import ConfusionMatrix, build_matrix
from .metrics import micro_f1, multilabel_accuracy, read_predictions
from .simulate import SimulationConfig, simulate_corpus, uniform_simulate
from .text import FORMATS, CorpusEntry, Utterance, read_corpus, write_corpus

_SIMULATOR_FLAGS = {"cm": "confusion_matrix", "uniform": "uniform"}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved for data errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_entries(path: str, format: str, case_fold: bool) -> list[CorpusEntry]:
    with open(path, "rb") as stream:
        return read_corpus(stream, format=format, case_fold=case_fold)


def _write_entries(path: str, entries: Sequence[CorpusEntry], format: str) -> None:
    with open(path, "wb") as stream:
        write_corpus(entries, stream, format=format)


def _load_matrix(path: str) -> ConfusionMatrix:
    with open(path, "r", encoding="utf-8") as stream:
        return ConfusionMatrix.loads(stream.read())


def _labeled_refs(entries: Sequence[CorpusEntry]) -> list[Utterance]:
    return [Utterance(entry.reference.tokens, entry.labels) for entry in entries]


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default="jsonl")
    parser.add_argument("--no-case-fold", dest="case_fold", action="store_false")


def _build_parser() -> _Parser:
    parser = _Parser(prog="asrnoise", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("build-matrix", parents=[], help="learn a confusion matrix")
    p.add_argument("--pairs", required=True, help="corpus of (ref, hyp) pairs")
    p.add_argument("--max-ngram", type=int, required=True)
    p.add_argument("--out", required=True, help="matrix JSON output path")
    p.add_argument("--min-weight", type=float, default=0.0,
                   help="drop confusions below this weight (default: keep all)")
    _add_corpus_flags(p)

    p = sub.add_parser("stats", help="error statistics of a paired corpus")
    p.add_argument("--pairs", required=True)
    _add_corpus_flags(p)

    p = sub.add_parser("simulate", help="simulate recognition errors")
    p.add_argument("--matrix", required=True)
    p.add_argument("--refs", required=True)
    p.add_argument("--wer", type=float, default=None, help="target overall WER")
    p.add_argument("--u", type=float, default=0.98,
                   help="cap on adjusted correct-recognition probability")
    p.add_argument("--r1-passes", type=int, default=10,
                   help="passes used to estimate the unadjusted WER")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_corpus_flags(p)

    p = sub.add_parser("uniform-simulate", help="uniform-substitution baseline")
    p.add_argument("--vocab-from", required=True,
                   help="corpus whose reference tokens form the vocabulary")
    p.add_argument("--refs", required=True)
    p.add_argument("--wer", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_corpus_flags(p)

    p = sub.add_parser("augment", help="expand a corpus for training")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--refs", required=True)
    p.add_argument("--matrix", default=None)
    p.add_argument("--wers", default="", help="comma-separated target WERs")
    p.add_argument("--simulator", choices=sorted(_SIMULATOR_FLAGS), default="cm")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_corpus_flags(p)

    p = sub.add_parser("subsample", help="keep a random fraction of entries")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="jsonl")

    p = sub.add_parser("eval", help="score multi-label predictions")
    p.add_argument("--pred", required=True,
                   help='JSONL rows of {"gold": [...], "pred": [...]}')

    return parser


def _cmd_build_matrix(args) -> int:
    entries = _read_entries(args.pairs, args.format, args.case_fold)
    matrix = build_matrix(entries, args.max_ngram)
    if args.min_weight > 0.0:
        matrix = matrix.prune(args.min_weight)
    with open(args.out, "w", encoding="utf-8") as stream:
        stream.write(matrix.dumps())
        stream.write("\n")
    return 0


def _cmd_stats(args) -> int:
    entries = _read_entries(args.pairs, args.format, args.case_fold)
    stats = error_stats(entries)
    json.dump(dataclasses.asdict(stats), sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_simulate(args) -> int:
    matrix = _load_matrix(args.matrix)
    refs = _labeled_refs(_read_entries(args.refs, args.format, args.case_fold))
    config = SimulationConfig(
        target_wer=args.wer,
        correct_cap=args.u,
        raw_wer_passes=args.r1_passes,
        seed=args.seed,
    )
    entries, stats = simulate_corpus(matrix, refs, config)
    _write_entries(args.out, entries, args.format)
    json.dump(dataclasses.asdict(stats), sys.stderr)
    sys.stderr.write("\n")
    return 0


def _cmd_uniform_simulate(args) -> int:
    vocab_entries = _read_entries(args.vocab_from, args.format, args.case_fold)
    vocab: set[str] = set()
    for entry in vocab_entries:
        vocab.update(entry.reference.tokens)
    refs = _labeled_refs(_read_entries(args.refs, args.format, args.case_fold))
    entries = uniform_simulate(vocab, refs, args.wer, args.seed)
    _write_entries(args.out, entries, args.format)
    return 0


def _parse_wers(raw: str) -> tuple[float, ...]:
    return tuple(float(part) for part in raw.split(",") if part.strip())


def _cmd_augment(args) -> int:
    entries = _read_entries(args.refs, args.format, args.case_fold)
    matrix = _load_matrix(args.matrix) if args.matrix is not None else None
    recipe = Recipe(
        mode=args.mode,
        target_wers=_parse_wers(args.wers),
        simulator=_SIMULATOR_FLAGS[args.simulator],
        seed=args.seed,
    )
    utterances = augment(entries, matrix, recipe)
    out_entries = [
        CorpusEntry(reference=Utterance(utt.tokens), labels=utt.labels)
        for utt in utterances
    ]
    _write_entries(args.out, out_entries, args.format)
    return 0


def _cmd_subsample(args) -> int:
    with open(args.infile, "rb") as stream:
        entries = read_corpus(stream, format=args.format, case_fold=False)
    kept = subsample(entries, args.fraction, args.seed)
    _write_entries(args.out, kept, args.format)
    return 0


def _cmd_eval(args) -> int:
    with open(args.pred, "r", encoding="utf-8") as stream:
        rows = read_predictions(stream)
    result = {"accuracy": multilabel_accuracy(rows), "f1": micro_f1(rows)}
    json.dump(result, sys.stdout)
    sys.stdout.write("\n")
    return 0


_COMMANDS = {
    "build-matrix": _cmd_build_matrix,
    "stats": _cmd_stats,
    "simulate": _cmd_simulate,
    "uniform-simulate": _cmd_uniform_simulate,
    "augment": _cmd_augment,
    "subsample": _cmd_subsample,
    "eval": _cmd_eval,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"asrnoise: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
