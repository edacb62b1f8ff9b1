"""Finitely presented groups and their abelianization invariants.

A presentation stores its relators cyclically reduced, with relators that
reduce to the empty word dropped (both normalizations preserve the group).
The abelianization is computed through an exact integer Smith normal form;
all arithmetic uses Python ints, so there is no overflow to worry about.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .kernels import exp_vector
from .words import Word, cyclically_reduce, max_generator

__all__ = [
    "Presentation", "AbelianInvariants", "FilterResult", "default_names",
    "relator_matrix", "smith_normal_form", "abelian_invariants",
    "free_rank_filter", "RelatorLattice",
]

_ALPHA = "abcdefghijklmnopqrstuvwxyz"


def default_names(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(_ALPHA[:m])
    return tuple(f"g{i + 1}" for i in range(m))


def free_names(n: int) -> tuple[str, ...]:
    """Conventional names for the free-group side: x, y, z, then x1, x2, ..."""
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class Presentation:
    num_generators: int
    relators: tuple[Word, ...] = ()
    generator_names: tuple[str, ...] = ()

    def __post_init__(self):
        m = self.num_generators
        if m < 1:
            raise ValueError("a presentation needs at least one generator")
        names = tuple(self.generator_names) or default_names(m)
        if len(names) != m:
            raise ValueError(f"{m} generators but {len(names)} names")
        if len(set(names)) != m:
            raise ValueError("generator names must be distinct")
        normalized = []
        for r in self.relators:
            w = Word(r)
            if max_generator(w) > m:
                raise ValueError(
                    f"relator {w!r} uses a generator beyond the {m} declared")
            core, _ = cyclically_reduce(w)
            if core:
                normalized.append(core)
        object.__setattr__(self, "relators", tuple(normalized))
        object.__setattr__(self, "generator_names", names)

    @property
    def num_relators(self) -> int:
        return len(self.relators)


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariants of the abelianized group: Z^free_rank + sum Z/d_i."""
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion {self.torsion} violates d_i | d_i+1")

    def is_free_abelian_of_rank(self, n: int) -> bool:
        return self.free_rank == n and not self.torsion


@dataclass(frozen=True)
class FilterResult:
    passed: bool
    invariants: AbelianInvariants
    reason: str = ""


def relator_matrix(p: Presentation) -> list[list[int]]:
    """s x m matrix of relator exponent sums."""
    return [list(exp_vector(r, p.num_generators)) for r in p.relators]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _pivot(D, t, s, m):
    """Smallest nonzero |entry| in the trailing block, ties row-major."""
    best = None
    for i in range(t, s):
        row = D[i]
        for j in range(t, m):
            v = row[j]
            if v != 0 and (best is None or abs(v) < abs(best[0])):
                best = (v, i, j)
    return best


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix: returns (D, U, V) with U*A*V = D.

    U and V are unimodular; the diagonal of D is nonnegative with each
    entry dividing the next.  Pivots are chosen smallest-absolute-value
    first (ties row-major) so the computation is deterministic.
    """
    s = len(A)
    m = len(A[0]) if s else 0
    D = [list(map(int, row)) for row in A]
    for row in D:
        if len(row) != m:
            raise ValueError("ragged matrix")
    U = _identity(s)
    V = _identity(m)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row dst += q * row src
        Ds, Dd = D[src], D[dst]
        for k in range(m):
            Dd[k] += q * Ds[k]
        Us, Ud = U[src], U[dst]
        for k in range(s):
            Ud[k] += q * Us[k]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(s, m):
        found = _pivot(D, t, s, m)
        if found is None:
            break
        while True:
            _, pi, pj = found
            swap_rows(t, pi)
            swap_cols(t, pj)
            dirty = False
            for i in range(t + 1, s):
                if D[i][t] != 0:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t] != 0:
                        dirty = True
            for j in range(t + 1, m):
                if D[t][j] != 0:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j] != 0:
                        dirty = True
            if dirty:
                found = _pivot(D, t, s, m)
                continue
            # block is clear; enforce divisibility of the remaining entries
            d = D[t][t]
            offender = None
            for i in range(t + 1, s):
                for j in range(t + 1, m):
                    if D[i][j] % d != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
            found = _pivot(D, t, s, m)
        if D[t][t] < 0:
            negate_row(t)
        t += 1

    if __debug__:
        _check_product(A, D, U, V)
    return D, U, V


def _check_product(A, D, U, V):
    s = len(A)
    m = len(A[0]) if s else 0
    UA = [[sum(U[i][k] * A[k][j] for k in range(s)) for j in range(m)]
          for i in range(s)]
    UAV = [[sum(UA[i][k] * V[k][j] for k in range(m)) for j in range(m)]
           for i in range(s)]
    assert UAV == D, "smith normal form self-check failed"


def diagonal_of(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


@lru_cache(maxsize=None)
def _snf_of_presentation(p: Presentation):
    A = relator_matrix(p)
    if not A:
        m = p.num_generators
        return [], _identity(0), _identity(m)
    return smith_normal_form(A)


def abelian_invariants(p: Presentation) -> AbelianInvariants:
    """Invariants of Z^m modulo the row lattice of the relator matrix."""
    D, _, _ = _snf_of_presentation(p)
    diag = [d for d in diagonal_of(D) if d != 0] if D else []
    torsion = tuple(d for d in diag if d >= 2)
    return AbelianInvariants(p.num_generators - len(diag), torsion)


def free_rank_filter(p: Presentation, n: int) -> FilterResult:
    """Sound obstruction: a free group of rank n abelianizes to Z^n."""
    inv = abelian_invariants(p)
    if inv.torsion:
        return FilterResult(False, inv, f"abelianization has torsion {list(inv.torsion)}")
    if inv.free_rank != n:
        return FilterResult(False, inv,
                            f"abelianization has free rank {inv.free_rank}, not {n}")
    return FilterResult(True, inv)


class RelatorLattice:
    """Membership tests for the lattice spanned by relator exponent vectors.

    With U*A*V = D, a vector v lies in the row lattice of A exactly when
    v*V lies in the row lattice of D, which is a divisibility check per
    coordinate.
    """

    def __init__(self, p: Presentation):
        self.presentation = p
        D, _, V = _snf_of_presentation(p)
        self._V = V
        self._diag = diagonal_of(D) if D else []
        self._m = p.num_generators
        # column-major V with the matching divisor, for the hot path
        self._cols = tuple(
            (tuple(V[k][j] for k in range(self._m)),
             self._diag[j] if j < len(self._diag) else 0)
            for j in range(self._m))

    def transform(self, vec: Sequence[int]) -> list[int]:
        V = self._V
        m = self._m
        return [sum(vec[k] * V[k][j] for k in range(m)) for j in range(m)]

    def residues(self, vec: Sequence[int]) -> list[int]:
        """Per-coordinate obstructions; all zero iff vec is in the lattice."""
        y = self.transform(vec)
        out = []
        for j, v in enumerate(y):
            if j < len(self._diag) and self._diag[j] != 0:
                out.append(v % self._diag[j])
            else:
                out.append(v)
        return out

    def contains(self, vec: Sequence[int]) -> bool:
        for col, d in self._cols:
            y = 0
            for vk, ck in zip(vec, col):
                y += vk * ck
            if d:
                if y % d:
                    return False
            elif y:
                return False
        return True
