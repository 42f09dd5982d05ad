"""Shared randomized-case generators for property tests."""

import random

import pytest

from gapfill import lattice as L
from gapfill import ngram


WORDS = ["plan", "company", "new", "old", "law", "agency", "time", "market"]
EXTRA = ["reform", "gun", "Tanaka", "1994", "the", "a", "of", "in"]


def random_lattice(rng: random.Random, max_states=12, empty_rate=0.15,
                   weighted=True) -> L.Lattice:
    """Random valid DAG lattice: forward edges only, every state on a
    start-final path by construction."""
    n = rng.randint(3, max_states)
    edges = []
    for i in range(n - 1):
        edges.append((i, rng.randint(i + 1, n - 1)))
    for j in range(1, n):
        edges.append((rng.randint(0, j - 1), j))
    for _ in range(rng.randint(0, n)):
        i = rng.randint(0, n - 2)
        edges.append((i, rng.randint(i + 1, n - 1)))
    transitions = []
    for (i, j) in edges:
        if rng.random() < empty_rate:
            tok = L.empty()
        else:
            tok = L.word(rng.choice(WORDS))
        w = 0.0
        if weighted and rng.random() < 0.3:
            w = round(rng.uniform(-2.0, 1.0), 3)
        transitions.append((i, j, tok, w))
    lat = L.build(range(n), 0, n - 1, transitions)
    assert L.validate(lat) is None
    return lat


def random_corpus(rng: random.Random, n_sentences=20):
    vocab = WORDS + EXTRA
    corpus = []
    for _ in range(n_sentences):
        length = rng.randint(1, 7)
        corpus.append(" ".join(rng.choice(vocab) for _ in range(length)))
    return corpus


def random_model(rng: random.Random, order=None) -> ngram.NGramModel:
    order = order or rng.choice([2, 2, 3])
    return ngram.good_turing(ngram.train(random_corpus(rng), order))


@pytest.fixture
def rng():
    return random.Random(20260808)
