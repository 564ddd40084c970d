"""Shared fixtures: a synthetic noisy corpus with known error structure.

Tokens are corrupted independently (substitute / insert-after /
delete) at rates tuned so that aligning the corpus measures WER 0.25
split 60/15/25 across sub/ins/del, with one clean token after every
error so each error region spans a single reference word and stays
representable by a unigram matrix.

Insertions and deletions are confined to disjoint word classes, and
the reference sampler keeps delete-class words out of the two
positions after an insert-class word and the one before.  A deletion
within one token of an insertion ties in edit distance with a
substitution pair (or outright collapses into one substitution), so
alignment re-types it; a simulator drawing keys independently would
hit those compositions even though the corpus never contained them.
With the classes kept apart neither side can produce them.  Inserted
tokens come from a vocabulary that never appears in references so
they cannot accidentally extend an alignment tie across repeated
words.
"""

import random

import pytest

from asrnoise import CorpusEntry, Utterance, build_matrix

# 48 words: small enough for ~2000 observations per key, large enough
# that accidental token collisions rarely let the aligner re-type errors
NOISE_VOCAB = tuple(f"w{i:02d}" for i in range(48))
INS_CLASS = frozenset(NOISE_VOCAB[:8])
DEL_CLASS = frozenset(NOISE_VOCAB[8:22])
INSERT_TOKENS = tuple(f"x{i:02d}" for i in range(8))

SUB_RATE = 0.1975
INS_RATE = 0.3310  # per insert-class token
DEL_RATE = 0.3409  # per delete-class token


def make_noisy_corpus(
    n_pairs,
    length,
    seed,
    *,
    sub_rate=None,
    ins_rate=None,
    del_rate=None,
):
    sub_rate = SUB_RATE if sub_rate is None else sub_rate
    ins_rate = INS_RATE if ins_rate is None else ins_rate
    del_rate = DEL_RATE if del_rate is None else del_rate
    rng = random.Random(seed)
    alternatives = {w: [v for v in NOISE_VOCAB if v != w] for w in NOISE_VOCAB}
    entries = []
    for _ in range(n_pairs):
        ref = []
        for _ in range(length):
            token = rng.choice(NOISE_VOCAB)
            while (
                token in DEL_CLASS
                and any(t in INS_CLASS for t in ref[-2:])
            ) or (token in INS_CLASS and ref and ref[-1] in DEL_CLASS):
                token = rng.choice(NOISE_VOCAB)
            ref.append(token)
        hyp = []
        clean = False  # force one clean token after every error
        for token in ref:
            if clean:
                hyp.append(token)
                clean = False
                continue
            r = rng.random()
            if r < sub_rate:
                hyp.append(rng.choice(alternatives[token]))
                clean = True
            elif token in INS_CLASS and r < sub_rate + ins_rate:
                hyp.append(token)
                hyp.append(rng.choice(INSERT_TOKENS))
                clean = True
            elif token in DEL_CLASS and r < sub_rate + del_rate:
                clean = True
            else:
                hyp.append(token)
        entries.append(
            CorpusEntry(Utterance(tuple(ref)), Utterance(tuple(hyp)))
        )
    return entries


@pytest.fixture(scope="session")
def noisy_corpus():
    # 100k reference words total
    return make_noisy_corpus(n_pairs=5000, length=20, seed=99)


@pytest.fixture(scope="session")
def noisy_matrix(noisy_corpus):
    # unigram keys: every confusion then costs exactly one word error,
    # which is what makes WER targeting exact in expectation
    return build_matrix(noisy_corpus, 1)
