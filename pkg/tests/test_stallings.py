import random

import pytest

from isofree.stallings import build_graph
from isofree.words import Word, substitute

from conftest import SEEDS
from oracles import subgroup_elements

X, Y, Z = 1, 2, 3


def random_word(rng, rank, max_len):
    out = []
    for _ in range(rng.randrange(0, max_len + 1)):
        choices = [v for g in range(1, rank + 1) for v in (g, -g)
                   if not (out and out[-1] == -v)]
        out.append(rng.choice(choices))
    return Word(out)


def test_wedge_of_loops():
    g = build_graph([Word([X]), Word([Y])], 2)
    assert g.rank() == 2
    assert g.num_vertices == 1
    assert g.basis() == [Word([X]), Word([Y])]


def test_powers_collapse_to_full_cyclic_group():
    # <x^2, x^3> = <x>: single loop, rank 1, and x is a member
    g = build_graph([Word([X, X]), Word([X, X, X])], 1)
    assert g.rank() == 1
    assert g.basis() == [Word([X])]
    assert g.contains(Word([X]))
    # independent check: x = x^3 * x^-2 is a product of the generators
    assert Word([X]) in subgroup_elements([Word([X, X]), Word([X, X, X])], 2)


def test_conjugate_powers_have_rank_one():
    # x y x^-1 and x y^2 x^-1 are powers of the same conjugate
    u = Word([X, Y, -X])
    assert u * u == Word([X, Y, Y, -X])
    g = build_graph([Word([X, Y, -X]), Word([X, Y, Y, -X])], 2)
    assert g.rank() == 1
    assert g.basis() == [u]


def test_trivial_subgroup():
    g = build_graph([], 2)
    assert g.rank() == 0
    assert g.num_vertices == 1
    assert g.basis() == []
    assert g.contains(Word())
    assert not g.contains(Word([X]))
    g2 = build_graph([Word(), Word([X, -X])], 2)
    assert g2 == g


def test_membership_examples():
    g = build_graph([Word([X, X])], 1)
    assert g.contains(Word())
    assert not g.contains(Word([X]))
    assert g.contains(Word([X, X, X, X]))
    g2 = build_graph([Word([X, X]), Word([X, X, X])], 1)
    assert g2.contains(Word([X]))


def test_membership_rejects_foreign_letters():
    g = build_graph([Word([X])], 1)
    with pytest.raises(ValueError):
        g.contains(Word([Y]))


def test_express_examples():
    g = build_graph([Word([X, X]), Word([X, X, X])], 1)
    expr = g.express(Word([X] * 5))
    assert expr is not None
    assert substitute(expr, g.basis()) == Word([X] * 5)
    wedge = build_graph([Word([X]), Word([Y])], 2)
    assert wedge.express(Word([X, -Y])) == Word([1, -2])
    assert build_graph([Word([X, X])], 1).express(Word([X])) is None


def test_tuple_membership_and_rank_bound():
    rng = random.Random(SEEDS[6])
    for _ in range(220):
        rank = rng.choice([2, 3])
        tuple_words = [random_word(rng, rank, 8)
                       for _ in range(rng.randrange(1, 6))]
        g = build_graph(tuple_words, rank)
        for w in tuple_words:
            assert g.contains(w)
        assert g.rank() <= len(tuple_words)
        assert len(g.basis()) == g.rank()


def test_express_substitute_round_trip():
    rng = random.Random(SEEDS[7])
    for _ in range(220):
        rank = rng.choice([2, 3])
        tuple_words = [random_word(rng, rank, 8)
                       for _ in range(rng.randrange(1, 6))]
        g = build_graph(tuple_words, rank)
        basis = g.basis()
        # members: random products of the tuple words
        member = Word()
        for _ in range(rng.randrange(1, 5)):
            w = rng.choice(tuple_words)
            member = member * (w if rng.random() < 0.5 else w.inverse())
        expr = g.express(member)
        assert expr is not None
        assert substitute(expr, basis) == member


def test_fold_order_confluence():
    rng = random.Random(SEEDS[8])
    for _ in range(220):
        rank = rng.choice([2, 3])
        tuple_words = [random_word(rng, rank, 8)
                       for _ in range(rng.randrange(1, 6))]
        g = build_graph(tuple_words, rank)
        shuffled = tuple_words[:]
        rng.shuffle(shuffled)
        if rng.random() < 0.5 and shuffled:
            shuffled[0] = shuffled[0].inverse()
        assert build_graph(shuffled, rank) == g


def test_basis_generates_the_same_graph():
    rng = random.Random(SEEDS[9])
    for _ in range(200):
        rank = rng.choice([2, 3])
        tuple_words = [random_word(rng, rank, 8)
                       for _ in range(rng.randrange(1, 6))]
        g = build_graph(tuple_words, rank)
        assert build_graph(g.basis(), rank) == g


def test_edge_list_export():
    g = build_graph([Word([X]), Word([Y])], 2)
    assert g.edge_list() == ["0 1 0", "0 2 0"]
