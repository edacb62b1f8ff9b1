"""Bounded search for homomorphisms and epimorphisms into free groups.

A map on generators extends to a homomorphism exactly when every relator
substitutes to the empty word, so candidate image tuples are enumerated
in nondecreasing total length (lexicographic by component within a length
class) and checked by substitution.  A tuple qualifies as an epimorphism
witness when its image subgroup, read off the folded graph, has rank at
least the requested n; budget exhaustion is reported as such and is never
a proof that no tuple exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .kernels import substitute_reduced
from .presentation import Presentation
from .stallings import FoldedGraph, build_graph
from .word_problem import Budget
from .words import EPSILON, Word, substitute, words_of_length

__all__ = [
    "GroupHom", "EpiWitness", "EpiSearchResult", "is_homomorphism_to_free",
    "image_tuples", "find_epimorphism", "restrict_to_rank",
]


@dataclass(frozen=True)
class GroupHom:
    """Map on generators from a presented group into a free group."""

    domain: Presentation
    codomain_rank: int
    images: tuple[Word, ...]
    verified: bool = False

    def __post_init__(self):
        if len(self.images) != self.domain.num_generators:
            raise ValueError("one image per generator required")
        object.__setattr__(self, "images", tuple(Word(im) for im in self.images))

    def apply(self, w) -> Word:
        # images are validated at construction, so skip the checks on the
        # per-word hot path
        return Word._reduced(substitute_reduced(tuple(w), self.images))

    @classmethod
    def checked(cls, domain: Presentation, codomain_rank: int,
                images: Sequence[Sequence[int]]) -> "GroupHom":
        images = tuple(Word(im) for im in images)
        if not is_homomorphism_to_free(domain, images):
            raise ValueError("images do not kill every relator")
        return cls(domain, codomain_rank, images, verified=True)


@dataclass(frozen=True)
class EpiWitness:
    """A relator-killing tuple whose image subgroup has the witnessed rank."""

    hom: GroupHom
    image_graph: FoldedGraph
    image_rank: int


@dataclass(frozen=True)
class EpiSearchResult:
    kind: str  # "found" | "exhausted"
    witness: Optional[EpiWitness] = None
    tuples_tried: int = 0


def is_homomorphism_to_free(p: Presentation, images: Sequence[Sequence[int]]) -> bool:
    """True iff every relator substitutes to the empty word."""
    if len(images) != p.num_generators:
        raise ValueError(f"expected {p.num_generators} images, got {len(images)}")
    images = tuple(Word(im) for im in images)
    return all(not substitute(r, images) for r in p.relators)


def _tuples_fixed_total(m: int, rank: int, total: int, cap: int) -> Iterator[tuple]:
    if m == 0:
        if total == 0:
            yield ()
        return
    low = max(0, total - (m - 1) * cap)
    for first_len in range(low, min(cap, total) + 1):
        for w in words_of_length(rank, first_len):
            for rest in _tuples_fixed_total(m - 1, rank, total - first_len, cap):
                yield (w,) + rest


def image_tuples(m: int, rank: int, max_component_length: int) -> Iterator[tuple]:
    """All m-tuples of reduced words with components up to the given length,
    in nondecreasing total length, lexicographic by component within a class."""
    for total in range(m * max_component_length + 1):
        yield from _tuples_fixed_total(m, rank, total, max_component_length)


def find_epimorphism(p: Presentation, n: int, budget: Budget) -> EpiSearchResult:
    """First tuple (in enumeration order) that kills the relators and spans
    an image of rank >= n; Exhausted reports only that the budget ran out."""
    if n < 0:
        raise ValueError("target rank must be >= 0")
    tried = 0
    for images in image_tuples(p.num_generators, n, budget.max_image_length):
        if tried >= budget.max_tuples:
            return EpiSearchResult("exhausted", tuples_tried=tried)
        tried += 1
        if not is_homomorphism_to_free(p, images):
            continue
        graph = build_graph(images, n)
        r = graph.rank()
        if r >= n:
            hom = GroupHom(p, n, images, verified=True)
            return EpiSearchResult(
                "found", witness=EpiWitness(hom, graph, r), tuples_tried=tried)
    return EpiSearchResult("exhausted", tuples_tried=tried)


def restrict_to_rank(witness: EpiWitness, n: int) -> GroupHom:
    """Compose with the retraction onto the first n basis elements.

    The image subgroup is free on the basis read off its folded graph;
    sending basis elements past the first n to the identity retracts it
    onto a rank-n subgroup, and the composite is re-verified on relators.
    """
    if witness.image_rank < n:
        raise ValueError(
            f"witness has image rank {witness.image_rank}, cannot restrict to {n}")
    graph = witness.image_graph
    basis = graph.basis()
    retraction = [basis[i] if i < n else EPSILON for i in range(len(basis))]
    new_images = []
    for image in witness.hom.images:
        expression = graph.express(image)
        if expression is None:
            raise AssertionError("image of a generator left its own subgroup")
        new_images.append(substitute(expression, retraction))
    hom = GroupHom.checked(witness.hom.domain, witness.hom.codomain_rank,
                           new_images)
    if build_graph(hom.images, hom.codomain_rank).rank() != n:
        raise AssertionError("retraction did not land on a rank-n image")
    return hom
