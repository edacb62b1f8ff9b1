import random

import pytest

from isofree.words import (
    EPSILON,
    Word,
    concat,
    count_reduced_words,
    cyclically_reduce,
    enumerate_words,
    invert,
    letter,
    reduce,
    shortlex_key,
    substitute,
    words_of_length,
)

from conftest import SEEDS
from oracles import brute_force_reduced_words, naive_reduce

A, B, C = 1, 2, 3  # letter values for the first three generators


def random_letters(rng, rank, length):
    return [rng.choice([v for g in range(1, rank + 1) for v in (g, -g)])
            for _ in range(length)]


def test_reduce_examples():
    assert reduce([A, -A]) == EPSILON
    assert reduce([A, B, -B, A]) == Word([A, A])
    assert reduce([-B, A, -A, B, C]) == Word([C])


def test_reduce_matches_naive_oracle_and_is_idempotent():
    rng = random.Random(SEEDS[0])
    for _ in range(300):
        raw = random_letters(rng, 3, rng.randrange(0, 24))
        reduced = reduce(raw)
        assert tuple(reduced) == naive_reduce(raw)
        assert reduce(reduced) == reduced
        assert len(reduced) <= len(raw)
        assert (len(raw) - len(reduced)) % 2 == 0


def test_invert_examples():
    assert invert(Word([A, B])) == Word([-B, -A])
    assert invert(EPSILON) == EPSILON


def test_concat_and_inverse_laws():
    assert concat(Word([A, B]), Word([-B, C])) == Word([A, C])
    assert concat(Word([A, B]), EPSILON) == Word([A, B])
    rng = random.Random(SEEDS[1])
    for _ in range(300):
        w = reduce(random_letters(rng, 2, rng.randrange(0, 12)))
        u = reduce(random_letters(rng, 2, rng.randrange(0, 12)))
        v = reduce(random_letters(rng, 2, rng.randrange(0, 12)))
        assert concat(w, invert(w)) == EPSILON
        assert invert(invert(w)) == w
        assert concat(concat(w, u), v) == concat(w, concat(u, v))


def test_cyclic_reduction():
    core, conj = cyclically_reduce(Word([A, B, -A]))
    assert core == Word([B]) and conj == Word([A])
    core, conj = cyclically_reduce(Word([A, B, A]))
    assert core == Word([A, B, A]) and conj == EPSILON
    core, conj = cyclically_reduce(Word([A, B, -A, -B]))
    assert core == Word([A, B, -A, -B]) and conj == EPSILON
    rng = random.Random(SEEDS[2])
    for _ in range(200):
        w = reduce(random_letters(rng, 2, rng.randrange(0, 14)))
        core, conj = cyclically_reduce(w)
        assert conj * core * conj.inverse() == w
        if len(core) >= 2:
            assert core[0] != -core[-1]


def test_substitute_examples():
    # c^-1 a b with a->x, b->y, c->xy collapses
    w = Word([-C, A, B])
    images = [Word([1]), Word([2]), Word([1, 2])]
    assert substitute(w, images) == EPSILON
    # identity images leave the word alone
    assert substitute(w, [Word([1]), Word([2]), Word([3])]) == w
    # a^3 with a -> x^2 gives x^6
    assert substitute(Word([A, A, A]), [Word([1, 1])]) == Word([1] * 6)


def test_substitute_rank_mismatch():
    with pytest.raises(ValueError):
        substitute(Word([B]), [Word([1])])


def test_letter_constructor_validation():
    assert letter(0, 1) == 1 and letter(1, -1) == -2
    with pytest.raises(ValueError):
        letter(0, 2)
    with pytest.raises(ValueError):
        letter(-1, 1)


def test_enumeration_first_words_and_counts():
    first = list(enumerate_words(2, 1))
    assert first == [EPSILON, Word([1]), Word([-1]), Word([2]), Word([-2])]
    # count of length-2 words over rank 2, against the brute-force oracle
    oracle = [w for w in brute_force_reduced_words(2, 2) if len(w) == 2]
    assert len(oracle) == 12
    assert len(list(words_of_length(2, 2))) == 12
    # rank 1 up to length 3: 7 words in shortlex order
    got = list(enumerate_words(1, 3))
    assert got == [EPSILON, Word([1]), Word([-1]), Word([1, 1]), Word([-1, -1]),
                   Word([1, 1, 1]), Word([-1, -1, -1])]


@pytest.mark.parametrize("rank,max_len", [(1, 5), (2, 5)])
def test_enumeration_against_brute_force(rank, max_len):
    got = list(enumerate_words(rank, max_len))
    oracle = brute_force_reduced_words(rank, max_len)
    assert got == oracle
    assert len(set(got)) == len(got)
    for w in got:
        assert tuple(w) == naive_reduce(w)
    assert sorted(got, key=shortlex_key) == got


def test_count_formula_matches_enumeration():
    for rank in (1, 2, 3):
        for length in range(5):
            assert count_reduced_words(rank, length) == \
                len(list(words_of_length(rank, length)))


def test_word_power():
    w = Word([A, B])
    assert w ** 0 == EPSILON
    assert w ** 3 == Word([A, B, A, B, A, B])
    assert w ** -1 == w.inverse()
