"""Triviality oracles for words in a finitely presented group.

Three backends, weakest to strongest:

* `prove_trivial` -- semi-decision for triviality.  A word equals the
  identity iff it is a product of conjugates of relators, so we search
  breadth-first through such products, staged by conjugator length, and
  return the product as a replayable certificate.
* `abelian_obstruction` -- total, cheap, partial converse: a word whose
  exponent vector falls outside the relator lattice is nontrivial.
* confluent rewriting systems -- a total word-problem solver when one is
  available, either supplied by the caller (and then audited) or built by
  Knuth-Bendix completion.

`WordOracle` chains them; every definitive answer carries a certificate
that the verifier can replay without repeating any search.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Sequence

from .presentation import Presentation, RelatorLattice
from .words import (
    EPSILON,
    Word,
    enumerate_words,
    letter_key,
    shortlex_key,
)
from .kernels import conjugate_reduced, concat_reduced, invert_letters

__all__ = [
    "Budget", "DEFAULT_BUDGET", "ConjugateProduct", "AbelianImage",
    "NormalFormNonEmpty", "OracleAnswer", "prove_trivial",
    "abelian_obstruction", "RewritingSystem", "free_cancellation_rules",
    "normal_form", "check_confluence", "ConfluenceResult", "knuth_bendix",
    "KBResult", "WordOracle", "enumerate_nontrivial",
]


# --------------------------------------------------------------------------
# budgets


@dataclass(frozen=True)
class Budget:
    """Caps that turn the unbounded searches into finite, deterministic runs.

    `max_search_states` bounds the work (successor words computed) of one
    decisive triviality search; `max_oracle_states` is the much smaller
    bound used for the triviality probe of each word during enumeration,
    where a miss merely lands the word in the skipped log.
    """

    max_certificate_terms: int = 4
    max_conjugator_length: int = 3
    max_word_length: int = 6
    max_image_length: int = 2
    max_tuples: int = 100_000
    kb_max_rules: int = 200
    kb_max_rule_length: int = 16
    quantum: int = 1
    max_search_states: int = 4000
    max_oracle_states: int = 150

    def __post_init__(self):
        for name in ("max_certificate_terms", "max_conjugator_length",
                     "max_word_length", "max_image_length", "max_tuples",
                     "kb_max_rules", "kb_max_rule_length", "quantum",
                     "max_search_states", "max_oracle_states"):
            if getattr(self, name) < 1:
                raise ValueError(f"budget field {name} must be >= 1")

    def scaled(self, factor: int) -> "Budget":
        return Budget(**{name: getattr(self, name) * factor
                         for name in self.__dataclass_fields__})


DEFAULT_BUDGET = Budget()


# --------------------------------------------------------------------------
# certificates and answers


@dataclass(frozen=True)
class ConjugateProduct:
    """Proof that `word` is trivial: word = prod c_i * r_{j_i}^{e_i} * c_i^-1."""

    word: Word
    terms: tuple[tuple[Word, int, int], ...]  # (conjugator, relator index, +-1)

    def replay(self, p: Presentation) -> Word:
        out: tuple = ()
        for conj, j, e in self.terms:
            r = p.relators[j]
            piece = tuple(r) if e == 1 else invert_letters(r)
            out = concat_reduced(out, conjugate_reduced(tuple(conj), piece))
        return Word._reduced(out)


@dataclass(frozen=True)
class AbelianImage:
    """Nontriviality witness: exponent vector outside the relator lattice."""

    word: Word
    vector: tuple[int, ...]


@dataclass(frozen=True)
class NormalFormNonEmpty:
    """Nontriviality witness: nonempty normal form under a confluent system."""

    word: Word
    system_id: str
    normal_form: tuple[int, ...]


TRIVIAL = "trivial"
NONTRIVIAL = "nontrivial"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class OracleAnswer:
    kind: str
    certificate: Optional[ConjugateProduct] = None
    witness: object = None
    units_spent: int = 0

    @property
    def is_trivial(self) -> bool:
        return self.kind == TRIVIAL

    @property
    def is_nontrivial(self) -> bool:
        return self.kind == NONTRIVIAL


# --------------------------------------------------------------------------
# yes-part: breadth-first search for a conjugate-product certificate


from functools import lru_cache


@lru_cache(maxsize=256)
def _conjugated_relators(p: Presentation, conj_cap: int):
    """Conjugated-relator factors and their (conjugator, relator, sign)
    descriptors, in the canonical order: conjugator shortlex, then relator
    index, then sign.  Two parallel tuples keep the search loop lean."""
    factors = []
    descriptors = []
    for conj in enumerate_words(p.num_generators, conj_cap):
        for j, r in enumerate(p.relators):
            for sign in (1, -1):
                piece = tuple(r) if sign == 1 else invert_letters(r)
                factors.append(conjugate_reduced(tuple(conj), piece))
                descriptors.append((conj, j, sign))
    return tuple(factors), tuple(descriptors)


def prove_trivial(p: Presentation, w, budget: Budget,
                  max_units: Optional[int] = None) -> OracleAnswer:
    """Search for a conjugate-product certificate that w = 1 in p.

    Certificates are graded by (term count, conjugator length) and the
    grades are explored breadth-first along diagonals: for each total
    g = t + c the stage (t, c) searches products of up to t conjugated
    relators with conjugators of length at most c, so neither axis can
    starve the other.  All stages share one work meter (a unit is one
    candidate product computed); the stage sequence is fixed, so the run
    is deterministic, and a larger budget explores the same sequence
    further: answers only ever upgrade from Unknown, never flip.
    """
    if not isinstance(w, Word):
        w = Word(w)
    if not w:
        return OracleAnswer(TRIVIAL, certificate=ConjugateProduct(w, ()))
    if not p.relators:
        return OracleAnswer(UNKNOWN)
    cap = budget.max_search_states if max_units is None else max_units
    units = 0
    max_rel = max(len(r) for r in p.relators)
    target = tuple(w)
    target_len = len(target)

    max_terms = budget.max_certificate_terms
    max_conj = budget.max_conjugator_length
    for diagonal in range(1, max_terms + max_conj + 1):
        for conj_cap in range(min(diagonal - 1, max_conj) + 1):
            terms_cap = diagonal - conj_cap
            if terms_cap > max_terms:
                continue
            factors, descriptors = _conjugated_relators(p, conj_cap)
            nmoves = len(factors)
            reach = 2 * conj_cap + max_rel
            parent: dict = {(): None}
            level: list[tuple] = [()]
            depth = 0
            while level and depth < terms_cap:
                depth += 1
                limit = target_len + (terms_cap - depth) * reach
                next_level: list[tuple] = []
                for current in level:
                    if units + nmoves > cap:
                        return OracleAnswer(UNKNOWN, units_spent=units)
                    units += nmoves
                    for k in range(nmoves):
                        product = concat_reduced(current, factors[k])
                        if len(product) > limit or product in parent:
                            continue
                        parent[product] = (current, k)
                        if product == target:
                            terms = []
                            node = product
                            while parent[node] is not None:
                                node, move = parent[node]
                                terms.append(descriptors[move])
                            terms.reverse()
                            cert = ConjugateProduct(w, tuple(terms))
                            return OracleAnswer(TRIVIAL, certificate=cert,
                                                units_spent=units)
                        next_level.append(product)
                level = next_level
    return OracleAnswer(UNKNOWN, units_spent=units)


# --------------------------------------------------------------------------
# no-part: abelianization obstruction


def abelian_obstruction(p: Presentation, w,
                        lattice: Optional[RelatorLattice] = None) -> OracleAnswer:
    """Nontrivial iff the exponent vector of w is outside the relator lattice."""
    from .kernels import exp_vector

    if not isinstance(w, Word):
        w = Word(w)
    lattice = lattice or RelatorLattice(p)
    vec = exp_vector(w, p.num_generators)
    if lattice.contains(vec):
        return OracleAnswer(UNKNOWN)
    return OracleAnswer(NONTRIVIAL, witness=AbelianImage(w, vec))


# --------------------------------------------------------------------------
# rewriting systems


def _string_shortlex_key(s: Sequence[int], pos: dict) -> tuple:
    return (len(s), tuple(pos[v] for v in s))


@dataclass(frozen=True)
class RewritingSystem:
    """Shortlex-oriented string rewriting over generators and inverses.

    Every rule strictly decreases shortlex, so rewriting always terminates
    and only confluence is at stake.  Strings are tuples over the same
    signed-letter alphabet as words, but need not be freely reduced.
    """

    rank: int
    rules: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    letter_order: tuple[int, ...] = ()

    def __post_init__(self):
        order = tuple(self.letter_order) or tuple(
            v for g in range(1, self.rank + 1) for v in (g, -g))
        expected = {v for g in range(1, self.rank + 1) for v in (g, -g)}
        if set(order) != expected or len(order) != len(expected):
            raise ValueError("letter order must be a permutation of the "
                             "signed alphabet")
        pos = {v: i for i, v in enumerate(order)}
        canon = []
        for lhs, rhs in self.rules:
            lhs = tuple(lhs)
            rhs = tuple(rhs)
            if not lhs:
                raise ValueError("rule with empty left-hand side")
            for v in lhs + rhs:
                if v not in pos:
                    raise ValueError(f"rule letter {v} outside the alphabet")
            if not _string_shortlex_key(lhs, pos) > _string_shortlex_key(rhs, pos):
                raise ValueError(
                    f"rule {lhs} -> {rhs} does not decrease shortlex")
            canon.append((lhs, rhs))
        canon.sort(key=lambda rule: (_string_shortlex_key(rule[0], pos),
                                     _string_shortlex_key(rule[1], pos)))
        object.__setattr__(self, "rules", tuple(canon))
        object.__setattr__(self, "letter_order", order)

    @property
    def letter_pos(self) -> dict:
        return {v: i for i, v in enumerate(self.letter_order)}

    @property
    def system_id(self) -> str:
        blob = repr((self.rank, self.letter_order, self.rules)).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def rewrite(self, s: Sequence[int], step_meter: Optional[list] = None,
                step_cap: Optional[int] = None) -> tuple[int, ...]:
        """Exhaustive leftmost-innermost rewriting to the irreducible form."""
        out = list(s)
        rules = self.rules
        i = 0
        max_lhs = max((len(l) for l, _ in rules), default=0)
        while i < len(out):
            hit = False
            for lhs, rhs in rules:
                n = len(lhs)
                if out[i:i + n] == list(lhs):
                    out[i:i + n] = list(rhs)
                    if step_meter is not None:
                        step_meter[0] += 1
                        if step_cap is not None and step_meter[0] > step_cap:
                            raise _RewriteBudgetExceeded()
                    i = max(0, i - max_lhs + 1)
                    hit = True
                    break
            if not hit:
                i += 1
        return tuple(out)


class _RewriteBudgetExceeded(Exception):
    pass


def free_cancellation_rules(rank: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    out = []
    for g in range(1, rank + 1):
        out.append(((g, -g), ()))
        out.append(((-g, g), ()))
    return out


def normal_form(rs: RewritingSystem, w: Sequence[int]) -> tuple[int, ...]:
    """Irreducible form of w; canonical per group element when rs is confluent."""
    return rs.rewrite(tuple(w))


@dataclass(frozen=True)
class ConfluenceResult:
    kind: str  # "confluent" | "failure" | "unknown"
    pair: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None


def _critical_superpositions(rules):
    """Superposition words with their two one-step reducts, deterministically."""
    for a, (l1, r1) in enumerate(rules):
        for b, (l2, r2) in enumerate(rules):
            # overlap: proper suffix of l1 equals proper prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    word = l1 + l2[k:]
                    yield word, r1 + l2[k:], l1[:-k] + r2
            # containment: l2 occurs strictly inside l1
            if a != b:
                for i in range(len(l1) - len(l2) + 1):
                    if l1[i:i + len(l2)] == l2:
                        yield l1, r1, l1[:i] + r2 + l1[i + len(l2):]


def check_confluence(rs: RewritingSystem, budget: Budget) -> ConfluenceResult:
    """Newman's lemma for a terminating system: test all critical pairs."""
    meter = [0]
    cap = budget.max_search_states
    try:
        for _, left, right in _critical_superpositions(rs.rules):
            a = rs.rewrite(left, meter, cap)
            b = rs.rewrite(right, meter, cap)
            if a != b:
                return ConfluenceResult("failure", pair=(a, b))
    except _RewriteBudgetExceeded:
        return ConfluenceResult("unknown")
    return ConfluenceResult("confluent")


@dataclass(frozen=True)
class KBResult:
    kind: str  # "success" | "unknown"
    system: Optional[RewritingSystem] = None
    iterations: int = 0


def knuth_bendix(p: Presentation, budget: Budget) -> KBResult:
    """Knuth-Bendix completion seeded with free cancellation and relators.

    Rules are always oriented large -> small in shortlex with the canonical
    letter order.  Budget exhaustion (too many rules, a rule outgrowing the
    length cap, or too many rounds) yields Unknown rather than a wrong
    system.
    """
    order = tuple(v for g in range(1, p.num_generators + 1) for v in (g, -g))
    pos = {v: i for i, v in enumerate(order)}
    key = lambda s: _string_shortlex_key(s, pos)

    def orient(u, v):
        return (u, v) if key(u) > key(v) else (v, u)

    rules = set(free_cancellation_rules(p.num_generators))
    for r in p.relators:
        rules.add(orient(tuple(r), ()))

    def rewrite_with(rules_list, s):
        probe = RewritingSystem(p.num_generators, tuple(rules_list))
        return probe.rewrite(s)

    for iteration in range(1, budget.kb_max_rules + 1):
        # interreduce: normalize each rule against the others
        changed = True
        while changed:
            changed = False
            for rule in sorted(rules, key=lambda ab: (key(ab[0]), key(ab[1]))):
                others = [x for x in rules if x != rule]
                if not others:
                    continue
                lhs, rhs = rule
                lhs2 = rewrite_with(others, lhs)
                rhs2 = rewrite_with(others, rhs)
                if lhs2 == lhs and rhs2 == rhs:
                    continue
                rules.discard(rule)
                if lhs2 != rhs2:
                    rules.add(orient(lhs2, rhs2))
                changed = True
                break

        if len(rules) > budget.kb_max_rules:
            return KBResult("unknown", iterations=iteration)
        if any(len(l) > budget.kb_max_rule_length for l, _ in rules):
            return KBResult("unknown", iterations=iteration)

        system = RewritingSystem(p.num_generators, tuple(rules))
        new_rules = set()
        for _, left, right in _critical_superpositions(system.rules):
            a = system.rewrite(left)
            b = system.rewrite(right)
            if a != b:
                new_rules.add(orient(a, b))
        if not new_rules:
            return KBResult("success", system=system, iterations=iteration)
        rules |= new_rules
    return KBResult("unknown", iterations=budget.kb_max_rules)


# --------------------------------------------------------------------------
# the composite oracle


class WordOracle:
    """Ordered backend chain: rewriting system, abelianization, certificate search.

    A supplied rewriting system is audited before use: it must pass the
    confluence check, send every relator to the empty normal form, and
    each rule must relate two words that are provably equal in the group
    (the latter via certificate search, with the certificates kept for
    replay).  The first definitive backend answer wins; answers of kind
    Trivial always carry a conjugate-product certificate.
    """

    def __init__(self, p: Presentation, budget: Budget,
                 rewriting_system: Optional[RewritingSystem] = None,
                 audit: bool = True):
        self.presentation = p
        self.budget = budget
        self.lattice = RelatorLattice(p)
        self.system = rewriting_system
        self.rule_proofs: tuple[ConjugateProduct, ...] = ()
        if rewriting_system is not None and audit:
            self.rule_proofs = _audit_system(p, rewriting_system, budget)

    def query(self, w, deep: bool = True) -> OracleAnswer:
        if not isinstance(w, Word):
            w = Word(w)
        if self.system is not None:
            nf = self.system.rewrite(tuple(w))
            if nf:
                witness = NormalFormNonEmpty(w, self.system.system_id, nf)
                return OracleAnswer(NONTRIVIAL, witness=witness)
            # trivial per the system; extract a replayable certificate
            answer = prove_trivial(self.presentation, w, self.budget)
            if answer.is_trivial:
                return answer
            return OracleAnswer(UNKNOWN, units_spent=answer.units_spent)
        answer = abelian_obstruction(self.presentation, w, self.lattice)
        if answer.is_nontrivial:
            return answer
        cap = self.budget.max_search_states if deep else self.budget.max_oracle_states
        return prove_trivial(self.presentation, w, self.budget, max_units=cap)


class OracleAuditError(ValueError):
    pass


def _audit_system(p: Presentation, rs: RewritingSystem,
                  budget: Budget) -> tuple[ConjugateProduct, ...]:
    if rs.rank != p.num_generators:
        raise OracleAuditError("rewriting system is over the wrong alphabet")
    result = check_confluence(rs, budget)
    if result.kind != "confluent":
        raise OracleAuditError(f"rewriting system not confluent: {result}")
    # completeness for triviality: every defining relation of the group's
    # monoid presentation (relators and the cancellation pairs) must
    # rewrite to the empty string, or nonempty normal forms prove nothing
    for lhs, _ in free_cancellation_rules(p.num_generators):
        if rs.rewrite(lhs):
            raise OracleAuditError(
                f"cancellation pair {lhs} has a nonempty normal form; the "
                "system cannot be complete for the group")
    for r in p.relators:
        if rs.rewrite(tuple(r)):
            raise OracleAuditError(
                f"relator {r!r} has a nonempty normal form under the system")
    proofs = []
    for lhs, rhs in rs.rules:
        diff = Word(tuple(lhs) + invert_letters(tuple(rhs)))
        answer = prove_trivial(p, diff, budget)
        if not answer.is_trivial:
            raise OracleAuditError(
                f"cannot certify rule {lhs} -> {rhs} as a group identity")
        proofs.append(answer.certificate)
    return tuple(proofs)


def enumerate_nontrivial(oracle: WordOracle, budget: Budget) -> Iterator[tuple]:
    """Stream of ("hit", word, witness) and ("skip", word, None) events.

    Walks every nonempty reduced word up to the budgeted length, emitting
    the ones the oracle certifies nontrivial; Unknowns become skip events
    so the caller can account for incompleteness (no skips can occur when
    the oracle runs a total backend).
    """
    rank = oracle.presentation.num_generators
    for w in enumerate_words(rank, budget.max_word_length):
        if not w:
            continue
        answer = oracle.query(w, deep=False)
        if answer.is_nontrivial:
            yield ("hit", w, answer.witness)
        elif answer.kind == UNKNOWN:
            yield ("skip", w, None)
