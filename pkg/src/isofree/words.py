"""Free-group words: reduction, inversion, products, substitution, enumeration.

A word is a freely reduced sequence of signed letters.  Generator i
(0-based) appears as the integer i+1, its inverse as -(i+1); the empty
word is the identity.  Equality of reduced words is equality in the free
group, so `Word` values can be compared and hashed directly.

The canonical letter order, which fixes every enumeration in the package,
is  x1 < x1^-1 < x2 < x2^-1 < ...  (each generator just before its
inverse).  Shortlex on words is length first, then this letter order.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .kernels import (
    concat_reduced,
    cyclic_bounds,
    exp_vector,
    invert_letters,
    reduce_letters,
    substitute_reduced,
)

__all__ = [
    "Word", "EPSILON", "letter", "gen_index", "letter_sign", "letter_key",
    "reduce", "invert", "concat", "cyclically_reduce", "substitute",
    "commutator", "max_generator", "shortlex_key", "words_of_length",
    "enumerate_words", "count_reduced_words", "spell_plain",
]


def letter(gen: int, sign: int) -> int:
    """Signed-letter encoding of generator `gen` (0-based) with sign +-1."""
    if gen < 0:
        raise ValueError(f"generator index must be >= 0, got {gen}")
    if sign not in (1, -1):
        raise ValueError(f"letter sign must be +1 or -1, got {sign}")
    return (gen + 1) * sign


def gen_index(v: int) -> int:
    """0-based generator index of a signed letter."""
    return abs(v) - 1


def letter_sign(v: int) -> int:
    return 1 if v > 0 else -1


def letter_key(v: int) -> int:
    """Position of letter v in the canonical order x1 < x1^-1 < x2 < ..."""
    return 2 * abs(v) - (2 if v > 0 else 1)


class Word(tuple):
    """A freely reduced word; constructing one reduces its input."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        return tuple.__new__(cls, reduce_letters(tuple(letters)))

    @classmethod
    def _reduced(cls, letters) -> "Word":
        """Wrap an already-reduced letter tuple without re-reducing."""
        return tuple.__new__(cls, letters)

    def inverse(self) -> "Word":
        return Word._reduced(invert_letters(self))

    def __mul__(self, other) -> "Word":
        return Word._reduced(concat_reduced(self, other))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        out: Word = EPSILON
        for _ in range(abs(n)):
            out = out * base
        return out

    def __repr__(self) -> str:
        return f"Word({spell_plain(self)!r})"


EPSILON = Word()


def reduce(letters: Iterable[int]) -> Word:
    """Unique freely reduced form of a letter sequence."""
    return Word(letters)


def invert(w: Sequence[int]) -> Word:
    return Word._reduced(invert_letters(reduce_letters(tuple(w))))


def concat(a: Word, b: Word) -> Word:
    return Word._reduced(concat_reduced(a, b))


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """Split w as conjugator * core * conjugator^-1 with cyclically reduced core."""
    i, j = cyclic_bounds(w)
    return Word._reduced(tuple(w[i:j])), Word._reduced(tuple(w[:i]))


def max_generator(w: Sequence[int]) -> int:
    """Number of generators needed to spell w (0 for the empty word)."""
    return max((abs(v) for v in w), default=0)


def substitute(w: Sequence[int], images: Sequence[Sequence[int]]) -> Word:
    """Apply the map generator i -> images[i] to w and reduce."""
    need = max_generator(w)
    if need > len(images):
        raise ValueError(
            f"word uses generator {need} but only {len(images)} images given")
    return Word._reduced(substitute_reduced(tuple(w), tuple(tuple(im) for im in images)))


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


def shortlex_key(w: Sequence[int]):
    """Sort key realizing shortlex with the canonical letter order."""
    return (len(w), tuple(letter_key(v) for v in w))


def words_of_length(rank: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly `length` letters, lexicographically."""
    if length == 0:
        yield EPSILON
        return
    if rank < 1:
        return
    order = tuple(v for g in range(1, rank + 1) for v in (g, -g))
    nletters = len(order)
    idx = [0] * length  # letter 1 repeated is reduced, so this start is valid
    letters = [order[0]] * length
    while True:
        yield Word._reduced(tuple(letters))
        pos = length - 1
        while pos >= 0:
            nxt = idx[pos] + 1
            # skip the letter cancelling with the left neighbour
            while nxt < nletters and pos > 0 and letters[pos - 1] == -order[nxt]:
                nxt += 1
            if nxt < nletters:
                idx[pos] = nxt
                letters[pos] = order[nxt]
                for q in range(pos + 1, length):
                    first = 0
                    if letters[q - 1] == -order[first]:
                        first += 1
                    idx[q] = first
                    letters[q] = order[first]
                break
            pos -= 1
        if pos < 0:
            return


def enumerate_words(rank: int, max_length: int) -> Iterator[Word]:
    """Every reduced word of length <= max_length, in shortlex order."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    for length in range(max_length + 1):
        yield from words_of_length(rank, length)


def count_reduced_words(rank: int, length: int) -> int:
    """Number of reduced words of exactly `length` letters."""
    if length == 0:
        return 1
    if rank < 1:
        return 0
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def spell_plain(w: Sequence[int]) -> str:
    """Generic rendering with generators x1, x2, ...; '1' for the identity."""
    if not w:
        return "1"
    parts = []
    i = 0
    n = len(w)
    while i < n:
        j = i
        while j < n and w[j] == w[i]:
            j += 1
        run = j - i
        name = f"x{abs(w[i])}"
        exp = run if w[i] > 0 else -run
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return "*".join(parts)
