"""Independent certificate replay.

Everything here recomputes claims from raw words and exact arithmetic:
conjugate products are multiplied out and compared letter by letter,
abelian witnesses are checked against a freshly computed relator lattice,
normal-form witnesses are re-rewritten under the embedded system (whose
own fitness -- shortlex orientation, confluence, relators reducing to the
empty string -- is also rechecked).  None of the search code that produced
a certificate is consulted; a verified outcome stands on replay alone.

Each check returns a list of problem strings; empty means verified.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .decision import (
    EmbedOutcome,
    InverseWitness,
    KernelWitness,
    Obstruction,
    Outcome,
)
from .hom_search import GroupHom
from .presentation import Presentation, RelatorLattice, abelian_invariants
from .word_problem import (
    AbelianImage,
    Budget,
    ConjugateProduct,
    NormalFormNonEmpty,
    RewritingSystem,
    check_confluence,
)
from .words import EPSILON, Word, commutator, substitute
from .kernels import exp_vector

__all__ = [
    "verify_conjugate_product", "verify_nontriviality", "verify_kernel_witness",
    "verify_inverse_witness", "verify_obstruction", "verify_outcome",
    "verify_embed_outcome", "verify_document",
]


def verify_conjugate_product(p: Presentation, cert: ConjugateProduct) -> list[str]:
    problems = []
    for k, (conj, j, e) in enumerate(cert.terms):
        if not 0 <= j < len(p.relators):
            problems.append(f"term {k} references relator {j} of "
                            f"{len(p.relators)}")
        if e not in (1, -1):
            problems.append(f"term {k} has exponent {e}, want +-1")
        if tuple(conj) != tuple(Word(conj)):
            problems.append(f"term {k} conjugator is not freely reduced")
    if problems:
        return problems
    product = cert.replay(p)
    if tuple(product) != tuple(Word(cert.word)):
        return [f"replayed product {product!r} differs from claimed word "
                f"{cert.word!r}"]
    return []


def verify_nontriviality(p: Presentation, witness,
                         system: Optional[RewritingSystem] = None) -> list[str]:
    if isinstance(witness, AbelianImage):
        vec = exp_vector(Word(witness.word), p.num_generators)
        if tuple(vec) != tuple(witness.vector):
            return [f"stored exponent vector {witness.vector} differs from "
                    f"recomputed {vec}"]
        if RelatorLattice(p).contains(vec):
            return [f"exponent vector {vec} lies in the relator lattice"]
        return []
    if isinstance(witness, NormalFormNonEmpty):
        if system is None:
            return ["normal-form witness without an embedded rewriting system"]
        problems = audit_rewriting_system(p, system)
        if system.system_id != witness.system_id:
            problems.append(
                f"witness system id {witness.system_id} does not match the "
                f"embedded system {system.system_id}")
        nf = system.rewrite(tuple(Word(witness.word)))
        if nf != tuple(witness.normal_form):
            problems.append(f"stored normal form {witness.normal_form} differs "
                            f"from recomputed {nf}")
        if not nf:
            problems.append("normal form is empty; word is trivial")
        return problems
    return [f"unknown nontriviality witness type {type(witness).__name__}"]


def audit_rewriting_system(p: Presentation, system: RewritingSystem,
                           rule_proofs: Sequence[ConjugateProduct] = ()
                           ) -> list[str]:
    """Replayable part of the fitness audit for an embedded system."""
    problems = []
    if system.rank != p.num_generators:
        problems.append("rewriting system alphabet does not match the "
                        "presentation")
        return problems
    result = check_confluence(system, Budget())
    if result.kind != "confluent":
        problems.append(f"embedded system fails the confluence check: "
                        f"{result.kind}")
    # nonempty normal forms witness nontriviality only when every defining
    # relation of the group (cancellation pairs and relators) rewrites to
    # the empty string: with confluence that makes trivial words reduce to it
    for g in range(1, p.num_generators + 1):
        for pair in ((g, -g), (-g, g)):
            if system.rewrite(pair):
                problems.append(f"cancellation pair {pair} does not rewrite "
                                "to the empty string")
    for r in p.relators:
        if system.rewrite(tuple(r)):
            problems.append(f"relator {r!r} does not rewrite to the empty "
                            "string")
    for k, proof in enumerate(rule_proofs):
        lhs, rhs = system.rules[k]
        diff = Word(tuple(lhs) + tuple(Word(rhs).inverse()))
        if tuple(proof.word) != tuple(diff):
            problems.append(f"rule proof {k} is for the wrong word")
        problems.extend(verify_conjugate_product(p, proof))
    return problems


def verify_kernel_witness(G: Presentation, phi: GroupHom, kw: KernelWitness,
                          target_presentation: Optional[Presentation] = None,
                          system: Optional[RewritingSystem] = None) -> list[str]:
    problems = verify_nontriviality(G, kw.nontriviality, system)
    word = Word(kw.word)
    stored = Word(_witness_word(kw.nontriviality))
    if tuple(word) != tuple(stored):
        problems.append("kernel word differs from the word in its "
                        "nontriviality witness")
    image = substitute(word, phi.images)
    if kw.image_proof.kind == "free_reduction":
        if image != EPSILON:
            problems.append(f"image {image!r} of the kernel word does not "
                            "freely reduce to the identity")
    elif kw.image_proof.kind == "conjugate_product":
        if target_presentation is None:
            problems.append("conjugate-product image proof without the "
                            "codomain presentation")
        elif kw.image_proof.product is None:
            problems.append("missing image conjugate product")
        else:
            if tuple(kw.image_proof.product.word) != tuple(image):
                problems.append("image proof is for the wrong word")
            problems.extend(verify_conjugate_product(
                target_presentation, kw.image_proof.product))
    else:
        problems.append(f"unknown image proof kind {kw.image_proof.kind!r}")
    return problems


def _witness_word(witness) -> Word:
    return witness.word


def verify_inverse_witness(G: Presentation, phi: GroupHom, iw: InverseWitness,
                           target_relators: Sequence[Word] = (),
                           system: Optional[RewritingSystem] = None) -> list[str]:
    problems = []
    if len(iw.psi_images) != phi.codomain_rank:
        problems.append(f"{len(iw.psi_images)} images for a rank "
                        f"{phi.codomain_rank} codomain")
        return problems
    if len(iw.relator_proofs) != len(target_relators):
        problems.append("one proof per codomain relator required")
    for k, rel in enumerate(target_relators):
        if k >= len(iw.relator_proofs):
            break
        expected = substitute(rel, iw.psi_images)
        proof = iw.relator_proofs[k]
        if tuple(proof.word) != tuple(expected):
            problems.append(f"relator proof {k} is for "
                            f"{proof.word!r}, expected {expected!r}")
        problems.extend(verify_conjugate_product(G, proof))
    if len(iw.roundtrip_proofs) != G.num_generators:
        problems.append("one roundtrip proof per domain generator required")
        return problems
    for i in range(G.num_generators):
        expected = substitute(phi.images[i], iw.psi_images) * \
            Word._reduced((-(i + 1),))
        proof = iw.roundtrip_proofs[i]
        if tuple(proof.word) != tuple(expected):
            problems.append(f"roundtrip proof {i} is for {proof.word!r}, "
                            f"expected {expected!r}")
        problems.extend(verify_conjugate_product(G, proof))
    return problems


def verify_obstruction(G: Presentation, n: int, ob: Obstruction) -> list[str]:
    if ob.kind == "rank_too_large":
        if n <= G.num_generators:
            return [f"rank {n} does not exceed the generator count"]
        return []
    if ob.kind == "abelianization_mismatch":
        inv = abelian_invariants(G)
        problems = []
        if ob.invariants is not None and ob.invariants != inv:
            problems.append(f"stored invariants {ob.invariants} differ from "
                            f"recomputed {inv}")
        if inv.is_free_abelian_of_rank(n):
            problems.append(f"abelianization is Z^{n}; no obstruction")
        return problems
    if ob.kind == "abelian_shortcut":
        problems = []
        if n < 2:
            problems.append("abelian shortcut only refutes ranks >= 2")
        m = G.num_generators
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
        if len(ob.commutator_proofs) != len(pairs):
            problems.append(f"{len(ob.commutator_proofs)} commutator proofs "
                            f"for {len(pairs)} generator pairs")
            return problems
        for proof, (i, j) in zip(ob.commutator_proofs, pairs):
            expected = commutator(Word._reduced((i + 1,)),
                                  Word._reduced((j + 1,)))
            if tuple(proof.word) != tuple(expected):
                problems.append(f"commutator proof ({i},{j}) is for the "
                                "wrong word")
            problems.extend(verify_conjugate_product(G, proof))
        return problems
    if ob.kind == "no_epimorphism":
        if not ob.exhaustive:
            return ["no-epimorphism obstruction without the exhaustive flag "
                    "is not definitive"]
        return ["no-epimorphism certificates cannot be replayed without "
                "re-running the search"]
    return [f"unknown obstruction kind {ob.kind!r}"]


def verify_outcome(G: Presentation, outcome: Outcome,
                   system: Optional[RewritingSystem] = None) -> list[str]:
    """Replay a decision outcome against a free codomain of its target rank."""
    if outcome.kind == "inconclusive":
        problems = []
        if outcome.kernel is not None and outcome.phi is not None:
            problems.extend(verify_kernel_witness(G, outcome.phi,
                                                  outcome.kernel,
                                                  system=system))
        return problems
    n = outcome.target_rank
    if outcome.kind == "not_isomorphic":
        if outcome.obstruction is not None:
            return verify_obstruction(G, n, outcome.obstruction)
        if outcome.kernel is None or outcome.phi is None:
            return ["not-isomorphic outcome carries no certificate"]
        if not outcome.hopfian_asserted:
            return ["kernel witness refutes isomorphism only under the "
                    "Hopfian assumption"]
        problems = _verify_phi(G, n, outcome.phi)
        problems.extend(verify_kernel_witness(G, outcome.phi, outcome.kernel,
                                              system=system))
        return problems
    if outcome.kind == "isomorphic":
        if outcome.phi is None or outcome.inverse is None:
            return ["isomorphic outcome carries no certificate"]
        problems = _verify_phi(G, n, outcome.phi)
        problems.extend(verify_inverse_witness(G, outcome.phi, outcome.inverse,
                                               target_relators=(),
                                               system=system))
        return problems
    return [f"unknown outcome kind {outcome.kind!r}"]


def _verify_phi(G: Presentation, n: int, phi: GroupHom) -> list[str]:
    problems = []
    if phi.codomain_rank != n:
        problems.append(f"phi maps into rank {phi.codomain_rank}, not {n}")
    for r in G.relators:
        if substitute(r, phi.images) != EPSILON:
            problems.append(f"phi does not kill relator {r!r}")
    return problems


def verify_embed_outcome(G: Presentation, outcome: EmbedOutcome,
                         system: Optional[RewritingSystem] = None) -> list[str]:
    problems = []
    if outcome.kind == "embeds":
        sub = outcome.per_rank.get(outcome.embed_rank)
        if sub is None or sub.kind != "isomorphic":
            return [f"embeds at rank {outcome.embed_rank} but no isomorphic "
                    "sub-outcome recorded"]
        return verify_outcome(G, sub, system)
    if outcome.kind == "not_embeddable":
        expected = set(range(G.num_generators + 1))
        if set(outcome.per_rank) != expected:
            problems.append(f"ranks {sorted(outcome.per_rank)} covered, "
                            f"expected {sorted(expected)}")
        for r, sub in sorted(outcome.per_rank.items()):
            if sub.kind != "not_isomorphic":
                problems.append(f"rank {r} sub-outcome is {sub.kind}, "
                                "not a refusal")
                continue
            sub_problems = verify_outcome(G, sub, system)
            problems.extend(f"rank {r}: {msg}" for msg in sub_problems)
        return problems
    return []  # inconclusive embeds: nothing definitive to replay


def verify_document(doc: dict) -> list[str]:
    """Replay a serialized outcome document (see the cli module)."""
    from . import textio

    problems = []
    if doc.get("format_version") != textio.FORMAT_VERSION:
        problems.append(f"unsupported format_version "
                        f"{doc.get('format_version')!r}")
        return problems
    try:
        G = textio.parse_presentation(doc["presentation"])
    except (KeyError, ValueError) as exc:
        return [f"cannot parse embedded presentation: {exc}"]
    expected_hash = textio._input_hash(doc)
    if doc.get("input_hash") != expected_hash:
        problems.append(f"input hash {doc.get('input_hash')} does not match "
                        f"recomputed {expected_hash}")
    system = None
    if doc.get("rewriting_system"):
        system = textio.load_rewriting_system(doc["rewriting_system"],
                                              G.generator_names)
    command = doc.get("command")
    if command == "decide-free":
        outcome = textio.certificate_outcome_from_json(
            doc.get("certificate"), doc["outcome"], G)
        problems.extend(verify_outcome(G, outcome, system))
    elif command == "embed-free":
        cert = doc.get("certificate") or {}
        per_rank = {}
        for key, sub in (cert.get("per_rank") or {}).items():
            per_rank[int(key)] = textio.certificate_outcome_from_json(
                sub.get("certificate"), sub["outcome"], G)
        outcome = EmbedOutcome(doc["outcome"]["kind"],
                               target_rank=doc["outcome"].get("target_rank"),
                               embed_rank=doc["outcome"].get("embed_rank"),
                               per_rank=per_rank)
        problems.extend(verify_embed_outcome(G, outcome, system))
    elif command == "wp":
        cert = doc.get("certificate")
        kind = doc["outcome"]["kind"]
        if kind == "trivial":
            from .textio import _cp_from_json
            cp = _cp_from_json(cert, G.generator_names)
            if textio.spell_letters(cp.word, G.generator_names) != \
                    textio.spell_letters(Word(textio.parse_letters(
                        doc["word"], G.generator_names)), G.generator_names):
                problems.append("certificate word differs from the queried "
                                "word")
            problems.extend(verify_conjugate_product(G, cp))
        elif kind == "nontrivial":
            from .textio import _nontriviality_from_json
            witness = _nontriviality_from_json(cert, G.generator_names)
            problems.extend(verify_nontriviality(G, witness, system))
    else:
        problems.append(f"cannot verify documents for command {command!r}")
    return problems
