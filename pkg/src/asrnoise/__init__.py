"""Learn ASR confusion patterns from paired text and replay them on
clean text, with optional steering of the overall word error rate.

Typical flow: read a (reference, hypothesis) corpus, ``build_matrix`` an
n-gram confusion matrix from it, then ``simulate_corpus`` over new
references at a chosen target WER, or use the ``augment`` recipes to
assemble a noisy training set in one call.
"""

from .alignment import Alignment, EditKind, EditOp, ErrorStats, align, error_stats
from .augment import Recipe, augment, subsample
from .estimators import ConfusionMatrixNoiser, UniformNoiser
from .matrix import (
    AlignedSegment,
    ConfusionMatrix,
    KeyStats,
    MatrixFormatError,
    build_matrix,
    segment_alignment,
)
from .metrics import LabeledPrediction, micro_f1, multilabel_accuracy, read_predictions
from .simulate import (
    AdjustmentPlan,
    PartitionPiece,
    SimulationConfig,
    adjustment_delta,
    estimate_raw_wer,
    partition,
    simulate_corpus,
    simulate_pass,
    simulate_utterance,
    uniform_simulate,
)
from .text import (
    CorpusEntry,
    CorpusFormatError,
    Utterance,
    read_corpus,
    tokenize,
    write_corpus,
)

__version__ = "0.1.0"

__all__ = [
    "AdjustmentPlan",
    "AlignedSegment",
    "Alignment",
    "ConfusionMatrix",
    "ConfusionMatrixNoiser",
    "CorpusEntry",
    "CorpusFormatError",
    "EditKind",
    "EditOp",
    "ErrorStats",
    "KeyStats",
    "LabeledPrediction",
    "MatrixFormatError",
    "PartitionPiece",
    "Recipe",
    "SimulationConfig",
    "UniformNoiser",
    "Utterance",
    "adjustment_delta",
    "align",
    "augment",
    "build_matrix",
    "error_stats",
    "estimate_raw_wer",
    "micro_f1",
    "multilabel_accuracy",
    "partition",
    "read_corpus",
    "read_predictions",
    "segment_alignment",
    "simulate_corpus",
    "simulate_pass",
    "simulate_utterance",
    "subsample",
    "tokenize",
    "uniform_simulate",
    "write_corpus",
]
