"""Top-level decision procedures.

Two semi-deciders run against each other under a deterministic round-robin
scheduler: a kernel search walks certified-nontrivial words of the domain
looking for one that the candidate epimorphism kills (non-isomorphism for
a Hopfian codomain), while an inverse search walks candidate generator
images for a map back that undoes the epimorphism on generators
(isomorphism).  The free-group pipeline screens with total, cheap
obstructions first (generator count, abelianization invariants, certified
commutativity), then searches for an epimorphism onto a rank-n image and
hands the restricted map to the two semi-deciders.

Every definitive outcome carries certificates that `isofree.verify` can
replay without rerunning any search; budget exhaustion is an explicit
Inconclusive outcome with the spent counters attached, never a silent "no".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from .presentation import (
    AbelianInvariants,
    Presentation,
    abelian_invariants,
    free_rank_filter,
)
from .hom_search import (
    EpiWitness,
    GroupHom,
    find_epimorphism,
    image_tuples,
    restrict_to_rank,
)
from .word_problem import (
    Budget,
    ConjugateProduct,
    OracleAnswer,
    RewritingSystem,
    WordOracle,
    enumerate_nontrivial,
    prove_trivial,
)
from .words import EPSILON, Word, commutator, substitute

__all__ = [
    "FreeTarget", "PresentedTarget", "ImageTrivialityProof", "KernelWitness",
    "InverseWitness", "Obstruction", "Outcome", "EmbedOutcome", "StepResult",
    "ScheduleResult", "run_interleaved", "kernel_search", "inverse_search",
    "decide_isomorphic_with_epi", "decide_free", "embeds_in_free",
    "ISOMORPHIC", "NOT_ISOMORPHIC", "INCONCLUSIVE",
]

ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not_isomorphic"
INCONCLUSIVE = "inconclusive"

CONTINUE = "continue"
DONE = "done"
EXHAUSTED = "exhausted"


# --------------------------------------------------------------------------
# codomains


@dataclass(frozen=True)
class FreeTarget:
    """A free group of the given rank (no relators)."""

    rank: int

    @property
    def generator_count(self) -> int:
        return self.rank

    @property
    def relators(self) -> tuple[Word, ...]:
        return ()


@dataclass(frozen=True)
class PresentedTarget:
    """A finitely presented codomain; triviality there is only semi-decided."""

    presentation: Presentation

    @property
    def generator_count(self) -> int:
        return self.presentation.num_generators

    @property
    def relators(self) -> tuple[Word, ...]:
        return self.presentation.relators


Target = Union[FreeTarget, PresentedTarget]


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class ImageTrivialityProof:
    """Why the image of the kernel word is trivial in the codomain."""

    kind: str  # "free_reduction" | "conjugate_product"
    product: Optional[ConjugateProduct] = None


@dataclass(frozen=True)
class KernelWitness:
    """A word nontrivial in the domain whose image is trivially the identity."""

    word: Word
    nontriviality: object  # AbelianImage | NormalFormNonEmpty
    image_proof: ImageTrivialityProof


@dataclass(frozen=True)
class InverseWitness:
    """Images for a map back, with proofs it is a homomorphism undoing phi."""

    psi_images: tuple[Word, ...]
    relator_proofs: tuple[ConjugateProduct, ...]
    roundtrip_proofs: tuple[ConjugateProduct, ...]


@dataclass(frozen=True)
class Obstruction:
    """A total, certificate-backed reason the groups cannot be isomorphic."""

    kind: str  # rank_too_large | abelianization_mismatch | abelian_shortcut | no_epimorphism
    invariants: Optional[AbelianInvariants] = None
    commutator_proofs: tuple[ConjugateProduct, ...] = ()
    exhaustive: bool = False
    detail: str = ""


@dataclass(frozen=True)
class Outcome:
    kind: str  # isomorphic | not_isomorphic | inconclusive
    target_rank: Optional[int] = None
    phi: Optional[GroupHom] = None
    inverse: Optional[InverseWitness] = None
    obstruction: Optional[Obstruction] = None
    kernel: Optional[KernelWitness] = None
    hopfian_asserted: bool = True
    report: dict = field(default_factory=dict)

    @property
    def definitive(self) -> bool:
        return self.kind != INCONCLUSIVE


@dataclass(frozen=True)
class EmbedOutcome:
    kind: str  # embeds | not_embeddable | inconclusive
    target_rank: int = 0
    embed_rank: Optional[int] = None
    per_rank: dict = field(default_factory=dict)  # rank -> Outcome


# --------------------------------------------------------------------------
# scheduler


@dataclass(frozen=True)
class StepResult:
    kind: str  # continue | done | exhausted
    payload: object = None


@dataclass(frozen=True)
class ScheduleResult:
    kind: str  # "definitive" | "all_exhausted"
    index: Optional[int] = None
    payload: object = None
    reports: tuple = ()


def run_interleaved(procedures: Sequence[Iterator[StepResult]],
                    quantum: int) -> ScheduleResult:
    """Round-robin the procedures, `quantum` steps each per turn.

    The first DONE stops everything (procedures earlier in the list are
    stepped earlier within a round, so ties go to the lowest index); when
    every procedure reports exhaustion the per-procedure reports are
    returned together.
    """
    if quantum < 1:
        raise ValueError("quantum must be >= 1")
    procedures = list(procedures)
    running = [True] * len(procedures)
    reports: list = [None] * len(procedures)
    while any(running):
        for i, proc in enumerate(procedures):
            if not running[i]:
                continue
            for _ in range(quantum):
                try:
                    step = next(proc)
                except StopIteration:
                    running[i] = False
                    break
                if step.kind == DONE:
                    return ScheduleResult("definitive", i, step.payload,
                                          tuple(reports))
                if step.kind == EXHAUSTED:
                    running[i] = False
                    reports[i] = step.payload
                    break
    return ScheduleResult("all_exhausted", reports=tuple(reports))


# --------------------------------------------------------------------------
# the two semi-deciders


def kernel_search(G: Presentation, oracle: WordOracle, phi: GroupHom,
                  target: Target, budget: Budget) -> Iterator[StepResult]:
    """Walk certified-nontrivial words of G; stop at one phi sends to 1.

    Exhaustion means only that no kernel element was found among the
    certified-nontrivial words within budget; words the oracle could not
    settle are counted as skipped.
    """
    counters = {"words_enumerated": 0, "words_skipped": 0}
    for event, w, witness in enumerate_nontrivial(oracle, budget):
        counters["words_enumerated"] += 1
        if event == "skip":
            counters["words_skipped"] += 1
            yield StepResult(CONTINUE)
            continue
        image = phi.apply(w)
        proof = None
        if isinstance(target, FreeTarget):
            if not image:
                proof = ImageTrivialityProof("free_reduction")
        else:
            answer = prove_trivial(target.presentation, image, budget,
                                   max_units=budget.max_oracle_states)
            if answer.is_trivial:
                proof = ImageTrivialityProof("conjugate_product",
                                             answer.certificate)
        if proof is not None:
            yield StepResult(DONE, KernelWitness(w, witness, proof))
            return
        yield StepResult(CONTINUE)
    yield StepResult(EXHAUSTED, counters)


def inverse_search(G: Presentation, oracle: WordOracle, phi: GroupHom,
                   target: Target, budget: Budget) -> Iterator[StepResult]:
    """Walk candidate images for a map back undoing phi on generators.

    A candidate tuple is accepted only with certificates: every codomain
    relator must map to a certified-trivial word of G, and composing back
    must fix every generator of G up to certified triviality.  The probes
    run at the per-candidate work cap: a certificate that needs more work
    than that merely rejects the candidate, it never corrupts an answer.
    """
    n = target.generator_count
    m = G.num_generators
    counters = {"tuples_tried": 0}
    inverses = [Word._reduced((-(i + 1),)) for i in range(m)]
    for psi in image_tuples(n, m, budget.max_word_length):
        if counters["tuples_tried"] >= budget.max_tuples:
            break
        counters["tuples_tried"] += 1
        relator_proofs = []
        roundtrip_proofs = []
        accepted = True
        for rel in target.relators:
            answer = oracle.query(substitute(rel, psi), deep=False)
            if not answer.is_trivial:
                accepted = False
                break
            relator_proofs.append(answer.certificate)
        if accepted:
            for i in range(m):
                word = substitute(phi.images[i], psi) * inverses[i]
                answer = oracle.query(word, deep=False)
                if not answer.is_trivial:
                    accepted = False
                    break
                roundtrip_proofs.append(answer.certificate)
        if accepted:
            witness = InverseWitness(tuple(psi), tuple(relator_proofs),
                                     tuple(roundtrip_proofs))
            yield StepResult(DONE, witness)
            return
        yield StepResult(CONTINUE)
    yield StepResult(EXHAUSTED, counters)


# --------------------------------------------------------------------------
# decisions


def decide_isomorphic_with_epi(G: Presentation, oracle: WordOracle,
                               target: Target, phi: GroupHom, budget: Budget,
                               hopfian_asserted: bool) -> Outcome:
    """Race the kernel search against the inverse search for a given epi.

    A kernel witness refutes isomorphism only under the Hopfian assumption
    (a proper quotient of a Hopfian group cannot be the group itself); for
    a free codomain the caller asserts it unconditionally.  Without the
    assertion a kernel witness is reported inside an Inconclusive outcome,
    and nothing further can be decided for this phi: an inverse witness
    would force phi injective, contradicting the kernel element.
    """
    if not phi.verified:
        raise ValueError("phi must be a verified homomorphism")
    rank = target.rank if isinstance(target, FreeTarget) else None
    schedule = run_interleaved(
        [kernel_search(G, oracle, phi, target, budget),
         inverse_search(G, oracle, phi, target, budget)],
        budget.quantum)
    if schedule.kind == "definitive" and schedule.index == 0:
        witness = schedule.payload
        if hopfian_asserted:
            return Outcome(NOT_ISOMORPHIC, target_rank=rank, phi=phi,
                           kernel=witness, hopfian_asserted=True,
                           report=_schedule_report(schedule))
        return Outcome(INCONCLUSIVE, target_rank=rank, phi=phi,
                       kernel=witness, hopfian_asserted=False,
                       report=_schedule_report(schedule))
    if schedule.kind == "definitive" and schedule.index == 1:
        return Outcome(ISOMORPHIC, target_rank=rank, phi=phi,
                       inverse=schedule.payload,
                       hopfian_asserted=hopfian_asserted,
                       report=_schedule_report(schedule))
    return Outcome(INCONCLUSIVE, target_rank=rank, phi=phi,
                   hopfian_asserted=hopfian_asserted,
                   report=_schedule_report(schedule))


def _schedule_report(schedule: ScheduleResult) -> dict:
    names = ("kernel_search", "inverse_search")
    out = {}
    for name, rep in zip(names, schedule.reports):
        if rep is not None:
            out[name] = dict(rep)
    return out


def decide_free(G: Presentation, n: int, budget: Budget,
                rewriting_system: Optional[RewritingSystem] = None) -> Outcome:
    """Decide whether G is isomorphic to the free group of rank n.

    Pipeline, first definitive step wins:

    1. more target generators than G has: impossible;
    2. abelianization invariants must be exactly Z^n;
    3. if all pairwise generator commutators are certified trivial, G is
       abelian, and an abelian group is free only in ranks 0 and 1 -- for
       n >= 2 that is a definitive refusal (for n <= 1 the pipeline
       continues, so that a positive answer still arrives with full
       certificates);
    4. search for a relator-killing tuple spanning rank >= n (exhaustion
       here is honest inconclusiveness, not a proof of absence);
    5. restrict onto a rank-n subgroup of the image and race the two
       semi-deciders, with the Hopfian assumption free groups satisfy.
    """
    if n < 0:
        raise ValueError("target rank must be >= 0")
    m = G.num_generators
    if n > m:
        return Outcome(
            NOT_ISOMORPHIC, target_rank=n,
            obstruction=Obstruction(
                "rank_too_large",
                detail=f"target rank {n} exceeds generator count {m}"))

    fl = free_rank_filter(G, n)
    if not fl.passed:
        return Outcome(
            NOT_ISOMORPHIC, target_rank=n,
            obstruction=Obstruction("abelianization_mismatch",
                                    invariants=fl.invariants,
                                    detail=fl.reason))

    oracle = WordOracle(G, budget, rewriting_system)
    commutator_proofs = []
    abelian_certified = True
    for i in range(m):
        for j in range(i + 1, m):
            w = commutator(Word._reduced((i + 1,)), Word._reduced((j + 1,)))
            answer = oracle.query(w, deep=True)
            if not answer.is_trivial:
                abelian_certified = False
                break
            commutator_proofs.append(answer.certificate)
        if not abelian_certified:
            break
    if abelian_certified and n >= 2:
        return Outcome(
            NOT_ISOMORPHIC, target_rank=n,
            obstruction=Obstruction("abelian_shortcut",
                                    invariants=fl.invariants,
                                    commutator_proofs=tuple(commutator_proofs),
                                    detail="group is abelian, rank >= 2 "
                                           "free groups are not"))

    search = find_epimorphism(G, n, budget)
    if search.kind != "found":
        return Outcome(INCONCLUSIVE, target_rank=n,
                       report={"epi_search": {"tuples_tried": search.tuples_tried}})

    phi = restrict_to_rank(search.witness, n)
    outcome = decide_isomorphic_with_epi(G, oracle, FreeTarget(n), phi,
                                         budget, hopfian_asserted=True)
    report = dict(outcome.report)
    report["epi_search"] = {"tuples_tried": search.tuples_tried,
                            "witness_rank": search.witness.image_rank}
    return Outcome(outcome.kind, target_rank=n, phi=outcome.phi,
                   inverse=outcome.inverse, obstruction=outcome.obstruction,
                   kernel=outcome.kernel,
                   hopfian_asserted=outcome.hopfian_asserted, report=report)


def embeds_in_free(G: Presentation, n: int, budget: Budget,
                   rewriting_system: Optional[RewritingSystem] = None) -> EmbedOutcome:
    """Decide whether G embeds in the free group of rank n >= 2.

    Every subgroup of a free group is free, and a subgroup generated by m
    elements has rank at most m, so G embeds in F_n exactly when G is
    isomorphic to some F_r with 0 <= r <= m (rank 0 being the trivial
    group).  Each candidate rank is decided independently by the bounded
    pipeline; the sub-runs are finite, so running them in sequence yields
    the same outcome as any fair interleaving.
    """
    if n < 2:
        raise ValueError("embedding targets of rank < 2 reduce to decide_free")
    per_rank: dict[int, Outcome] = {}
    for r in range(G.num_generators + 1):
        outcome = decide_free(G, r, budget, rewriting_system)
        per_rank[r] = outcome
        if outcome.kind == ISOMORPHIC:
            return EmbedOutcome("embeds", target_rank=n, embed_rank=r,
                                per_rank=per_rank)
    if all(o.kind == NOT_ISOMORPHIC for o in per_rank.values()):
        return EmbedOutcome("not_embeddable", target_rank=n, per_rank=per_rank)
    return EmbedOutcome("inconclusive", target_rank=n, per_rank=per_rank)
