import random

import pytest

from isofree.presentation import (
    AbelianInvariants,
    Presentation,
    RelatorLattice,
    abelian_invariants,
    free_rank_filter,
    relator_matrix,
    smith_normal_form,
)
from isofree.textio import parse_presentation
from isofree.words import Word

from conftest import SEEDS
from oracles import bareiss_determinant, snf_diagonal_from_divisors


def test_construction_normalizes_relators():
    # relators come back cyclically reduced, trivial ones dropped
    p = Presentation(2, (Word([1, 2, -2, -1]), Word([1, 2, -1])))
    assert p.relators == (Word([2]),)
    assert p.generator_names == ("a", "b")


def test_construction_rejects_bad_input():
    with pytest.raises(ValueError):
        Presentation(0, ())
    with pytest.raises(ValueError):
        Presentation(1, (Word([2]),))
    with pytest.raises(ValueError):
        Presentation(2, (), ("a", "a"))


def test_relator_matrix_examples():
    assert relator_matrix(parse_presentation("<a,b | [a,b]>")) == [[0, 0]]
    assert relator_matrix(parse_presentation("<a | a^2>")) == [[2]]
    assert relator_matrix(parse_presentation("<a,b | a^2*b^-3>")) == [[2, -3]]


def check_snf(A):
    D, U, V = smith_normal_form(A)
    s = len(A)
    m = len(A[0]) if s else 0
    UA = [[sum(U[i][k] * A[k][j] for k in range(s)) for j in range(m)]
          for i in range(s)]
    UAV = [[sum(UA[i][k] * V[k][j] for k in range(m)) for j in range(m)]
           for i in range(s)]
    assert UAV == D
    assert abs(bareiss_determinant(U)) == 1
    assert abs(bareiss_determinant(V)) == 1
    diag = [D[i][i] for i in range(min(s, m))]
    for i in range(s):
        for j in range(m):
            if i != j:
                assert D[i][j] == 0
    for d in diag:
        assert d >= 0
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    return diag


def test_snf_examples():
    assert check_snf([[2]]) == [2]
    assert check_snf([[1, 0], [0, 1]]) == [1, 1]
    # diag(2,3) has invariant factors 1, 6 (via the determinantal divisors)
    A = [[2, 0], [0, 3]]
    assert snf_diagonal_from_divisors(A) == [1, 6]
    assert check_snf(A) == [1, 6]


def test_snf_random_matrices_up_to_5x5():
    rng = random.Random(SEEDS[3])
    for _ in range(220):
        s = rng.randrange(1, 6)
        m = rng.randrange(1, 6)
        A = [[rng.randrange(-9, 10) for _ in range(m)] for _ in range(s)]
        check_snf(A)


def test_snf_determinantal_divisor_oracle_up_to_3x3():
    rng = random.Random(SEEDS[4])
    for _ in range(220):
        s = rng.randrange(1, 4)
        m = rng.randrange(1, 4)
        A = [[rng.randrange(-9, 10) for _ in range(m)] for _ in range(s)]
        D, _, _ = smith_normal_form(A)
        diag = [D[i][i] for i in range(min(s, m))]
        assert diag == snf_diagonal_from_divisors(A)


def test_abelian_invariants_examples():
    assert abelian_invariants(parse_presentation("<a,b | [a,b]>")) == \
        AbelianInvariants(2, ())
    assert abelian_invariants(parse_presentation("<a | a^2>")) == \
        AbelianInvariants(0, (2,))
    assert abelian_invariants(parse_presentation("<a,b | a^2*b^-3>")) == \
        AbelianInvariants(1, ())


def test_free_rank_filter_examples():
    assert free_rank_filter(parse_presentation("<a,b | [a,b]>"), 2).passed
    result = free_rank_filter(parse_presentation("<a | a^2>"), 1)
    assert not result.passed and "torsion" in result.reason
    result = free_rank_filter(parse_presentation("<a,b | a^2*b^-3>"), 2)
    assert not result.passed and "free rank 1" in result.reason


def test_filter_passes_free_presentations_with_trivial_relators():
    # adding relators that freely reduce to nothing never fails the filter
    for n in (1, 2, 3):
        p = Presentation(n, (Word([1, -1]), Word([]),))
        assert free_rank_filter(p, n).passed
        assert not p.relators


def test_torsion_divisibility_validated():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (4, 2))


def test_relator_lattice_membership():
    p = parse_presentation("<a,b | a^2*b^-3>")
    lattice = RelatorLattice(p)
    assert lattice.contains((2, -3))
    assert lattice.contains((-4, 6))
    assert not lattice.contains((1, 0))
    assert not lattice.contains((2, 3))
    assert all(r == 0 for r in lattice.residues((2, -3)))
    # residues match the slow transform-based path
    rng = random.Random(SEEDS[5])
    for _ in range(200):
        vec = (rng.randrange(-6, 7), rng.randrange(-6, 7))
        assert lattice.contains(vec) == \
            all(r == 0 for r in lattice.residues(vec))


def test_lattice_no_relators():
    p = Presentation(2, ())
    lattice = RelatorLattice(p)
    assert lattice.contains((0, 0))
    assert not lattice.contains((1, 0))
