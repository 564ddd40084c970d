import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asrnoise import (
    CorpusFormatError,
    LabeledPrediction,
    micro_f1,
    multilabel_accuracy,
    read_predictions,
)


def row(gold, pred):
    return LabeledPrediction(frozenset(gold), frozenset(pred))


def test_exact_match_scores_one():
    rows = [row({"a", "b"}, {"a", "b"}), row({"c"}, {"c"})]
    assert multilabel_accuracy(rows) == 1.0
    assert micro_f1(rows) == 1.0


def test_hand_counted_mixture():
    # tp=2 (a,b), fp=1 (x), fn=1 (c)
    rows = [row({"a", "b", "c"}, {"a", "b", "x"})]
    assert multilabel_accuracy(rows) == pytest.approx(2 / 4)
    assert micro_f1(rows) == pytest.approx(4 / 6)


def test_disjoint_prediction_scores_zero():
    rows = [row({"a"}, {"b"})]
    assert multilabel_accuracy(rows) == 0.0
    assert micro_f1(rows) == 0.0


def test_pooling_is_micro_not_macro():
    # one perfect small row must not offset a large bad row equally
    rows = [row({"a"}, {"a"}), row(set("bcdefg"), set())]
    assert multilabel_accuracy(rows) == pytest.approx(1 / 7)


def test_empty_sides_count_via_counterpart():
    rows = [row(set(), {"a"}), row({"b"}, set())]
    assert multilabel_accuracy(rows) == 0.0


def test_all_empty_rows_reject():
    with pytest.raises(ValueError):
        multilabel_accuracy([row(set(), set())])
    with pytest.raises(ValueError):
        micro_f1([])


_labels = st.frozensets(st.sampled_from("abcdef"), max_size=4)


@given(st.lists(st.builds(LabeledPrediction, _labels, _labels), min_size=1, max_size=30))
def test_accuracy_never_exceeds_f1(rows):
    tp = sum(len(r.gold & r.predicted) for r in rows)
    fp = sum(len(r.predicted - r.gold) for r in rows)
    fn = sum(len(r.gold - r.predicted) for r in rows)
    if tp + fp + fn == 0:
        return
    acc = multilabel_accuracy(rows)
    f1 = micro_f1(rows)
    assert 0.0 <= acc <= f1 <= 1.0


def test_read_predictions():
    payload = '{"gold": ["a", "b"], "pred": ["a"]}\n\n{"gold": [], "pred": []}\n'
    rows = read_predictions(io.StringIO(payload))
    assert rows == [row({"a", "b"}, {"a"}), row(set(), set())]


@pytest.mark.parametrize(
    "line",
    ["nope", '{"gold": "a", "pred": []}', '{"gold": [], "pred": [1]}', '{"pred": []}', "[1]"],
)
def test_read_predictions_rejects_bad_rows(line):
    with pytest.raises(CorpusFormatError):
        read_predictions(io.StringIO(line + "\n"))
