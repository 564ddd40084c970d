"""Acceptance suite: one test per criterion, c01 through c12.

c05/c06 share the session-scoped synthetic corpus fixtures from
conftest; c12 needs real data and is skipped unless ASRNOISE_DSTC2_DIR
points at a directory of corpus JSONL splits (train/dev/test).
"""

import itertools
import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from pathlib import Path

import pytest

from asrnoise import (
    AdjustmentPlan,
    ConfusionMatrix,
    CorpusEntry,
    Recipe,
    SimulationConfig,
    Utterance,
    adjustment_delta,
    align,
    augment,
    error_stats,
    read_corpus,
    simulate_corpus,
    simulate_pass,
    simulate_utterance,
    uniform_simulate,
    write_corpus,
)
from asrnoise.cli import main
from asrnoise.metrics import LabeledPrediction, micro_f1, multilabel_accuracy
from asrnoise.simulate import _STREAM_SIMULATE, mix_seed


@lru_cache(maxsize=None)
def _oracle_distance(ref, hyp):
    # definitional recursion, shared across overlapping suffixes
    if not ref:
        return len(hyp)
    if not hyp:
        return len(ref)
    return min(
        _oracle_distance(ref[1:], hyp[1:]) + (ref[0] != hyp[0]),
        _oracle_distance(ref[1:], hyp) + 1,
        _oracle_distance(ref, hyp[1:]) + 1,
    )


def test_c01_alignment_matches_oracle_exhaustively():
    seqs = [
        seq
        for length in range(0, 7)
        for seq in itertools.product("abc", repeat=length)
    ]
    assert len(seqs) == 1093
    for ref in seqs:
        for hyp in seqs:
            assert align(ref, hyp).distance == _oracle_distance(ref, hyp), (ref, hyp)
    _oracle_distance.cache_clear()


def test_c02_alignment_reconstructs_both_sides():
    rng = random.Random(20260814)
    alphabet = "abcde"
    for _ in range(10000):
        ref = tuple(rng.choice(alphabet) for _ in range(rng.randrange(0, 13)))
        hyp = tuple(rng.choice(alphabet) for _ in range(rng.randrange(0, 13)))
        a = align(ref, hyp)
        assert tuple(a.ref_tokens()) == ref
        assert tuple(a.hyp_tokens()) == hyp


def test_c03_adjustment_algebra():
    # worked examples, exact up to float noise
    cases = [
        (6.0, 10.0, 0.3, 0.2, 0.99, 2.7272727272727272),
        (7.0, 10.0, 0.3, 0.3, 0.99, 0.0),
        (9.0, 10.0, 0.1, 0.5, 0.98, -8.0),
        (9.9, 10.0, 0.3, 0.05, 0.98, -5.0),  # cap engaged
    ]
    for c, s, r1, r2, u, expected in cases:
        x = adjustment_delta(c, s, AdjustmentPlan(r1, r2, u))
        assert x == pytest.approx(expected, abs=1e-9)

    rng = random.Random(42)
    for _ in range(1000):
        s = rng.uniform(0.001, 10000.0)
        c = s * rng.uniform(0.0, 0.999)
        r1 = rng.uniform(0.0, 0.99)
        r2 = rng.uniform(0.0, 0.99)
        u = rng.uniform(0.01, 0.99)
        x = adjustment_delta(c, s, AdjustmentPlan(r1, r2, u))
        h = min((c / s) * (1.0 - r2) / (1.0 - r1), u)
        assert c + x >= -1e-9 * s
        assert (c + x) / (s + x) == pytest.approx(h, rel=1e-9, abs=1e-12)


def _adjusted_correct_probability(individual_wer, plan):
    # realized correct probability for a key with the given raw WER
    s = 1.0
    c = 1.0 - individual_wer
    if c == s:
        return 1.0
    x = adjustment_delta(c, s, plan)
    return (c + x) / (s + x)


def test_c04_adjustment_is_monotone_and_identity_on_trivial_case():
    rng = random.Random(7)
    for _ in range(1000):
        r1 = rng.uniform(0.0, 0.95)
        r2 = rng.uniform(0.0, 0.95)
        u = rng.uniform(0.05, 0.99)
        plan = AdjustmentPlan(r1, r2, u)
        w_lo = rng.uniform(0.001, 0.97)
        w_hi = w_lo + rng.uniform(0.01, 0.999 - w_lo)
        h_lo = _adjusted_correct_probability(w_lo, plan)
        h_hi = _adjusted_correct_probability(w_hi, plan)
        # larger raw individual WER never yields a smaller adjusted WER
        assert 1.0 - h_lo <= 1.0 - h_hi + 1e-12
        factor = (1.0 - r2) / (1.0 - r1)
        uncapped = (1.0 - w_lo) * factor < u and (1.0 - w_hi) * factor < u
        if uncapped:
            assert 1.0 - h_lo < 1.0 - h_hi - 1e-9

    # all keys at raw WER r1 come out at exactly r2 when the cap is slack
    for _ in range(1000):
        r1 = rng.uniform(0.0, 0.95)
        r2 = rng.uniform(0.01, 0.95)
        plan = AdjustmentPlan(r1, r2, max(1.0 - r2 + 1e-6, 0.5))
        h = _adjusted_correct_probability(r1, plan)
        assert 1.0 - h == pytest.approx(r2, abs=1e-9)


def test_c05_raw_simulation_reproduces_corpus_error_distribution(
    noisy_corpus, noisy_matrix
):
    corpus = error_stats(noisy_corpus)
    # the generator injects ~25% WER split 60/15/25 across types
    assert corpus.wer == pytest.approx(0.25, abs=0.02)
    assert corpus.sub_frac == pytest.approx(0.60, abs=0.03)
    assert corpus.ins_frac == pytest.approx(0.15, abs=0.03)
    assert corpus.del_frac == pytest.approx(0.25, abs=0.03)

    refs = [entry.reference for entry in noisy_corpus]
    assert sum(len(r.tokens) for r in refs) >= 100000
    started = time.perf_counter()
    _, achieved = simulate_corpus(noisy_matrix, refs, SimulationConfig(seed=20260814))
    elapsed = time.perf_counter() - started
    assert abs(achieved.wer - corpus.wer) <= 0.02
    assert abs(achieved.sub_frac - corpus.sub_frac) <= 0.05
    assert abs(achieved.ins_frac - corpus.ins_frac) <= 0.05
    assert abs(achieved.del_frac - corpus.del_frac) <= 0.05
    assert elapsed < 60.0


def test_c06_simulation_hits_requested_wer_targets(noisy_corpus, noisy_matrix):
    refs = [entry.reference for entry in noisy_corpus]
    for target in (0.15, 0.20, 0.279):
        config = SimulationConfig(
            target_wer=target, raw_wer_passes=3, seed=914 + int(target * 1000)
        )
        _, achieved = simulate_corpus(noisy_matrix, refs, config)
        assert abs(achieved.wer - target) <= 0.02, (target, achieved.wer)


def test_c07_uniform_baseline_hits_rate_with_substitutions_only():
    rng = random.Random(515)
    vocab = [f"w{i:04d}" for i in range(1000)]
    refs = [
        Utterance(tuple(rng.choice(vocab) for _ in range(20))) for _ in range(5000)
    ]
    requested = 0.279
    entries = uniform_simulate(vocab, refs, requested, seed=99)
    for entry in entries:
        assert len(entry.hypothesis.tokens) == len(entry.reference.tokens)
    stats = error_stats(entries)
    assert stats.ref_word_count == 100000
    assert stats.insertions == 0
    assert stats.deletions == 0
    assert abs(stats.wer - requested) <= 0.01


def test_c08_augmentation_recipe_cardinalities():
    entries = [
        CorpusEntry(Utterance(("a", "b")), Utterance(("a", "x")), frozenset({"l"}))
        for _ in range(100)
    ]
    wers4 = (0.279, 0.20, 0.15)

    def rows(mode, wers):
        recipe = Recipe(mode=mode, target_wers=wers, simulator="uniform", seed=3)
        return augment(entries, None, recipe)

    # one simulated pass per target on top of the clean copy
    assert len(rows("s1", (0.279,))) == 200  # 1:1 clean to noisy
    assert len(rows("s1", (0.20,))) == 200
    assert len(rows("s1", wers4)) == 400  # 1:3 clean to noisy
    assert len(rows("s2", wers4)) == 500  # plus the original hypotheses


def test_c09_metric_fixtures_and_accuracy_f1_order():
    def row(gold, pred):
        return LabeledPrediction(frozenset(gold), frozenset(pred))

    perfect = [row({"a", "b"}, {"a", "b"})]
    assert multilabel_accuracy(perfect) == 1.0
    assert micro_f1(perfect) == 1.0
    disjoint = [row({"a"}, {"b"})]
    assert multilabel_accuracy(disjoint) == 0.0
    assert micro_f1(disjoint) == 0.0
    # tp=2, fp=1, fn=1 pooled over two rows
    mixed = [row({"a", "b"}, {"a", "x"}), row({"c"}, {"c"})]
    assert multilabel_accuracy(mixed) == 0.5
    assert micro_f1(mixed) == pytest.approx(2 / 3)

    rng = random.Random(31)
    labels = "abcdefgh"
    for _ in range(1000):
        rows = [
            LabeledPrediction(
                frozenset(rng.sample(labels, rng.randrange(0, 5))),
                frozenset(rng.sample(labels, rng.randrange(0, 5))),
            )
            for _ in range(rng.randrange(1, 8))
        ]
        if all(not r.gold and not r.predicted for r in rows):
            continue
        assert multilabel_accuracy(rows) <= micro_f1(rows)


def test_c10_outputs_are_deterministic_and_order_independent(
    tmp_path, noisy_corpus, noisy_matrix
):
    pairs = tmp_path / "pairs.jsonl"
    with open(pairs, "wb") as stream:
        write_corpus(noisy_corpus[:200], stream)
    matrix_path = tmp_path / "matrix.json"
    matrix_path.write_text(noisy_matrix.dumps() + "\n", encoding="utf-8")

    sim_a, sim_b = tmp_path / "sim_a.jsonl", tmp_path / "sim_b.jsonl"
    argv = [
        "simulate", "--matrix", str(matrix_path), "--refs", str(pairs),
        "--wer", "0.2", "--r1-passes", "2", "--seed", "77",
    ]
    assert main(argv + ["--out", str(sim_a)]) == 0
    assert main(argv + ["--out", str(sim_b)]) == 0
    assert sim_a.read_bytes() == sim_b.read_bytes()

    aug_a, aug_b = tmp_path / "aug_a.jsonl", tmp_path / "aug_b.jsonl"
    argv = [
        "augment", "--mode", "s2", "--refs", str(pairs), "--matrix",
        str(matrix_path), "--wers", "0.279,0.15", "--seed", "78",
    ]
    assert main(argv + ["--out", str(aug_a)]) == 0
    assert main(argv + ["--out", str(aug_b)]) == 0
    assert aug_a.read_bytes() == aug_b.read_bytes()

    # per-utterance seed streams: a thread pool over indices reproduces
    # the sequential pass, so worker count cannot change the output
    refs = [entry.reference for entry in noisy_corpus[:200]]
    sequential = simulate_pass(noisy_matrix, refs, None, 79)

    def one(index):
        rng = random.Random(mix_seed(79, _STREAM_SIMULATE, index))
        return simulate_utterance(noisy_matrix, refs[index], None, rng)

    for workers in (1, 4):
        with ThreadPoolExecutor(max_workers=workers) as pool:
            threaded = list(pool.map(one, range(len(refs))))
        assert [entry.hypothesis for entry in sequential] == threaded


def test_c11_matrix_serialization_round_trip():
    # deterministic case with deletion (empty target) entries
    explicit = ConfusionMatrix(
        2,
        {
            ("a",): {(): 2.0, ("a",): 5.0, ("a", "x"): 1.0},
            ("a", "b"): {(): 1.0},
            ("b",): {("b",): 0.125},
        },
    )
    assert ConfusionMatrix.loads(explicit.dumps()) == explicit

    rng = random.Random(63)
    tokens = ["a", "b", "c", "d", "e"]
    for _ in range(200):
        entries = {}
        for _ in range(rng.randrange(1, 10)):
            source = tuple(rng.sample(tokens, rng.randrange(1, 4)))
            targets = {}
            for _ in range(rng.randrange(1, 5)):
                target = tuple(
                    rng.choice(tokens) for _ in range(rng.randrange(0, 4))
                )
                targets[target] = rng.uniform(0.1, 50.0)
            entries[source] = targets
        matrix = ConfusionMatrix(3, entries)
        assert ConfusionMatrix.loads(matrix.dumps()) == matrix


DSTC2_DIR = os.environ.get("ASRNOISE_DSTC2_DIR")


@pytest.mark.skipif(
    not DSTC2_DIR, reason="set ASRNOISE_DSTC2_DIR to a directory of corpus splits"
)
def test_c12_dstc2_corpus_statistics():
    root = Path(DSTC2_DIR)
    splits = {}
    for name in ("train", "dev", "test"):
        path = root / f"{name}.jsonl"
        if path.exists():
            with open(path, "rb") as stream:
                splits[name] = read_corpus(stream)
    assert "test" in splits, "test.jsonl is required"
    everything = [entry for split in splits.values() for entry in split]
    overall = error_stats(everything)
    assert overall.wer == pytest.approx(0.2789, abs=0.001)
    assert overall.sub_frac == pytest.approx(0.5896, abs=0.005)
    assert overall.ins_frac == pytest.approx(0.1566, abs=0.005)
    assert overall.del_frac == pytest.approx(0.2538, abs=0.005)
    test_stats = error_stats(splits["test"])
    assert test_stats.perfect_fraction == pytest.approx(0.45, abs=0.01)
