"""Brute-force oracles the tests check the real implementations against.

Everything here is deliberately naive: exhaustive generate-and-filter
enumeration, gcds of explicitly enumerated minors, fraction-free
determinants, product enumeration for subgroup membership.  None of it
shares code with the implementations under test.
"""

import itertools
from math import gcd

from isofree.words import Word, shortlex_key


def brute_force_reduced_words(rank, max_length):
    """All reduced words of length <= max_length via reduce-all-strings."""
    alphabet = [v for g in range(1, rank + 1) for v in (g, -g)]
    seen = set()
    for length in range(max_length + 1):
        for string in itertools.product(alphabet, repeat=length):
            seen.add(Word(string))
    return sorted(seen, key=shortlex_key)


def naive_reduce(seq):
    """Quadratic free reduction by repeated single-pass cancellation."""
    seq = list(seq)
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] == -seq[i + 1]:
                del seq[i:i + 2]
                changed = True
                break
    return tuple(seq)


def bareiss_determinant(M):
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    n = len(M)
    if n == 0:
        return 1
    M = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def determinantal_divisors(A):
    """d_1, d_1*d_2, ... as gcds of all k x k minors, via enumeration."""
    s = len(A)
    m = len(A[0]) if s else 0
    out = []
    for k in range(1, min(s, m) + 1):
        g = 0
        for rows in itertools.combinations(range(s), k):
            for cols in itertools.combinations(range(m), k):
                minor = bareiss_determinant(
                    [[A[i][j] for j in cols] for i in rows])
                g = gcd(g, minor)
        out.append(g)
    return out


def snf_diagonal_from_divisors(A):
    """Diagonal of the Smith normal form via determinantal divisors."""
    divisors = determinantal_divisors(A)
    diag = []
    prev = 1
    for dk in divisors:
        if dk == 0:
            break
        diag.append(dk // prev)
        prev = dk
    size = min(len(A), len(A[0]) if A else 0)
    while len(diag) < size:
        diag.append(0)
    return diag


def subgroup_elements(generators, factors):
    """All products of up to `factors` generators or inverses, reduced."""
    gens = [Word(g) for g in generators]
    gens += [g.inverse() for g in gens]
    frontier = {Word()}
    seen = {Word()}
    for _ in range(factors):
        frontier = {w * g for w in frontier for g in gens} - seen
        seen |= frontier
    return seen
