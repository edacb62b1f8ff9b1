"""Textual forms: presentation grammar, word spelling, fixtures, documents.

Presentation grammar:

    '<' name (',' name)* '|' word (',' word)* '>'

with an empty relator list allowed.  Word atoms are `name`, `name^k` for a
nonzero integer k, the commutator sugar `[u,v]` (expanding to u v u^-1
v^-1, itself exponentiable), and `1` for the identity; atoms juxtapose
with an optional `*`.  Parse errors carry the offending position.

Rewriting-system fixtures are line based:

    order: a, a^-1, b, b^-1
    rule: b*a -> a*b

Rule sides are strings over the doubled alphabet and are deliberately not
freely reduced when read back.

Outcome documents are JSON with stable key order:
`{format_version, command, input_hash, presentation, target_rank, budgets,
outcome, certificate, budget_report, ...}`; they embed every word a
replay needs, so the standalone verifier never reruns a search.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import asdict
from typing import Optional, Sequence

from .decision import (
    EmbedOutcome,
    ImageTrivialityProof,
    InverseWitness,
    KernelWitness,
    Obstruction,
    Outcome,
)
from .hom_search import GroupHom
from .presentation import AbelianInvariants, Presentation, free_names
from .word_problem import (
    AbelianImage,
    Budget,
    ConjugateProduct,
    NormalFormNonEmpty,
    OracleAnswer,
    RewritingSystem,
)
from .words import Word

FORMAT_VERSION = 1

__all__ = [
    "ParseError", "parse_presentation", "parse_word", "parse_letters",
    "spell_letters", "presentation_text", "presentation_hash",
    "load_rewriting_system", "dump_rewriting_system", "budget_to_json",
    "budget_from_json", "decide_document", "embed_document", "wp_document",
    "FORMAT_VERSION",
]


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[<>|,^*\[\]]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                                 pos)
            break
        if match.lastgroup == "name":
            tokens.append(("name", match.group("name"), match.start("name")))
        elif match.lastgroup == "int":
            tokens.append(("int", int(match.group("int")), match.start("int")))
        else:
            tokens.append(("sym", match.group("sym"), match.start("sym")))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, name_to_index: Optional[dict] = None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = name_to_index

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str):
        kind, value, pos = self.next()
        if kind != "sym" or value != sym:
            raise ParseError(f"expected {sym!r}, found {value!r}", pos)

    def at_sym(self, sym: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "sym" and value == sym

    def parse_exponent(self) -> int:
        """Optional '^' int; 1 when absent; zero exponents are rejected."""
        if not self.at_sym("^"):
            return 1
        self.next()
        kind, value, pos = self.next()
        if kind != "int":
            raise ParseError(f"expected integer exponent, found {value!r}", pos)
        if value == 0:
            raise ParseError("zero exponent is not allowed", pos)
        return value

    def parse_atom(self) -> list[int]:
        kind, value, pos = self.peek()
        if kind == "name":
            self.next()
            if value not in self.names:
                raise ParseError(f"unknown generator {value!r}", pos)
            base = [self.names[value] + 1]
        elif kind == "int" and value == 1:
            self.next()
            return []
        elif kind == "sym" and value == "[":
            self.next()
            u = self.parse_letter_seq(stop={",", "]"})
            self.expect_sym(",")
            v = self.parse_letter_seq(stop={"]"})
            if not self.at_sym("]"):
                raise ParseError("unbalanced brackets: expected ']'",
                                 self.peek()[2])
            self.next()
            base = u + v + [-x for x in reversed(u)] + [-x for x in reversed(v)]
        else:
            raise ParseError(f"expected a word atom, found {value!r}", pos)
        exp = self.parse_exponent()
        if exp < 0:
            base = [-x for x in reversed(base)]
            exp = -exp
        return base * exp

    def at_atom_start(self) -> bool:
        kind, value, _ = self.peek()
        return (kind == "name" or (kind == "int" and value == 1)
                or (kind == "sym" and value == "["))

    def parse_letter_seq(self, stop: set) -> list[int]:
        out: list[int] = []
        first = True
        while True:
            kind, value, pos = self.peek()
            if kind == "end" or (kind == "sym" and value in stop):
                if first:
                    raise ParseError("empty word", pos)
                return out
            if not first and self.at_sym("*"):
                self.next()
            if not self.at_atom_start():
                raise ParseError(f"expected a word atom, found {value!r}",
                                 self.peek()[2])
            out.extend(self.parse_atom())
            first = False


def parse_letters(text: str, names: Sequence[str]) -> list[int]:
    """Letter sequence of a word expression, without free reduction."""
    parser = _Parser(text, {name: i for i, name in enumerate(names)})
    seq = parser.parse_letter_seq(stop=set())
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {value!r}", pos)
    return seq


def parse_word(text: str, names: Sequence[str]) -> Word:
    return Word(parse_letters(text, names))


def parse_presentation(text: str) -> Presentation:
    parser = _Parser(text)
    parser.expect_sym("<")
    names = []
    while True:
        kind, value, pos = parser.next()
        if kind != "name":
            raise ParseError(f"expected a generator name, found {value!r}", pos)
        names.append(value)
        if parser.at_sym(","):
            parser.next()
            continue
        break
    parser.expect_sym("|")
    parser.names = {name: i for i, name in enumerate(names)}
    relators = []
    if not parser.at_sym(">"):
        while True:
            seq = parser.parse_letter_seq(stop={",", ">"})
            relators.append(Word(seq))
            if parser.at_sym(","):
                parser.next()
                continue
            break
    if not parser.at_sym(">"):
        raise ParseError("unbalanced brackets: expected '>'", parser.peek()[2])
    parser.next()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {value!r}", pos)
    return Presentation(len(names), tuple(relators), tuple(names))


def spell_letters(seq: Sequence[int], names: Sequence[str]) -> str:
    """Render a letter sequence (not necessarily reduced); '1' if empty."""
    if not seq:
        return "1"
    parts = []
    i = 0
    n = len(seq)
    while i < n:
        j = i
        while j < n and seq[j] == seq[i]:
            j += 1
        run = j - i
        name = names[abs(seq[i]) - 1]
        exp = run if seq[i] > 0 else -run
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return "*".join(parts)


def presentation_text(p: Presentation) -> str:
    relators = ", ".join(spell_letters(r, p.generator_names) for r in p.relators)
    return f"<{','.join(p.generator_names)} | {relators}>"


def presentation_hash(p: Presentation) -> str:
    return hashlib.sha256(presentation_text(p).encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# rewriting-system fixtures


def _signed_letter_text(v: int, names: Sequence[str]) -> str:
    name = names[abs(v) - 1]
    return name if v > 0 else f"{name}^-1"


def dump_rewriting_system(rs: RewritingSystem, names: Sequence[str]) -> str:
    lines = ["order: " + ", ".join(_signed_letter_text(v, names)
                                   for v in rs.letter_order)]
    for lhs, rhs in rs.rules:
        lines.append(f"rule: {spell_letters(lhs, names)} -> "
                     f"{spell_letters(rhs, names)}")
    return "\n".join(lines) + "\n"


def load_rewriting_system(text: str, names: Optional[Sequence[str]] = None
                          ) -> RewritingSystem:
    """Parse a fixture; generator names come from the order line unless given."""
    order_tokens: list[tuple[str, int]] = []
    rule_lines: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("order:"):
            for item in line[len("order:"):].split(","):
                item = item.strip()
                if item.endswith("^-1"):
                    order_tokens.append((item[:-3].strip(), -1))
                else:
                    order_tokens.append((item, 1))
        elif line.startswith("rule:"):
            rule_lines.append(line[len("rule:"):])
        else:
            raise ParseError(f"unrecognized fixture line {line!r}", 0)
    if not order_tokens:
        raise ParseError("fixture has no order line", 0)
    if names is None:
        seen: list[str] = []
        for name, _ in order_tokens:
            if name not in seen:
                seen.append(name)
        names = seen
    index = {name: i for i, name in enumerate(names)}
    order = []
    for name, sign in order_tokens:
        if name not in index:
            raise ParseError(f"order letter {name!r} is not a generator", 0)
        order.append(sign * (index[name] + 1))
    rules = []
    for body in rule_lines:
        if "->" not in body:
            raise ParseError(f"rule line without '->': {body!r}", 0)
        lhs_text, rhs_text = body.split("->", 1)
        lhs = tuple(parse_letters(lhs_text.strip(), names))
        rhs_text = rhs_text.strip()
        rhs = tuple(parse_letters(rhs_text, names)) if rhs_text else ()
        rules.append((lhs, rhs))
    return RewritingSystem(len(names), tuple(rules), tuple(order))


# --------------------------------------------------------------------------
# JSON documents


def budget_to_json(budget: Budget) -> dict:
    return {name: getattr(budget, name)
            for name in sorted(budget.__dataclass_fields__)}


def budget_from_json(doc: dict) -> Budget:
    return Budget(**doc)


def _cp_to_json(cp: ConjugateProduct, names: Sequence[str]) -> dict:
    return {
        "word": spell_letters(cp.word, names),
        "terms": [{"conjugator": spell_letters(c, names),
                   "relator": j, "sign": e} for c, j, e in cp.terms],
    }


def _cp_from_json(doc: dict, names: Sequence[str]) -> ConjugateProduct:
    terms = tuple((parse_word(t["conjugator"], names), t["relator"], t["sign"])
                  for t in doc["terms"])
    return ConjugateProduct(parse_word(doc["word"], names), terms)


def _nontriviality_to_json(witness, names: Sequence[str]) -> dict:
    if isinstance(witness, AbelianImage):
        return {"kind": "abelian_image",
                "word": spell_letters(witness.word, names),
                "vector": list(witness.vector)}
    if isinstance(witness, NormalFormNonEmpty):
        return {"kind": "normal_form",
                "word": spell_letters(witness.word, names),
                "system_id": witness.system_id,
                "normal_form": list(witness.normal_form)}
    raise TypeError(f"unknown nontriviality witness {witness!r}")


def _nontriviality_from_json(doc: dict, names: Sequence[str]):
    if doc["kind"] == "abelian_image":
        return AbelianImage(parse_word(doc["word"], names),
                            tuple(doc["vector"]))
    if doc["kind"] == "normal_form":
        return NormalFormNonEmpty(parse_word(doc["word"], names),
                                  doc["system_id"],
                                  tuple(doc["normal_form"]))
    raise ValueError(f"unknown nontriviality kind {doc['kind']!r}")


def _invariants_to_json(inv: Optional[AbelianInvariants]):
    if inv is None:
        return None
    return {"free_rank": inv.free_rank, "torsion": list(inv.torsion)}


def _invariants_from_json(doc):
    if doc is None:
        return None
    return AbelianInvariants(doc["free_rank"], tuple(doc["torsion"]))


def _kernel_to_json(kw: KernelWitness, g_names, target_names) -> dict:
    out = {
        "word": spell_letters(kw.word, g_names),
        "nontriviality": _nontriviality_to_json(kw.nontriviality, g_names),
        "image_proof": {"kind": kw.image_proof.kind},
    }
    if kw.image_proof.product is not None:
        out["image_proof"]["product"] = _cp_to_json(kw.image_proof.product,
                                                    target_names)
    return out


def _kernel_from_json(doc: dict, g_names, target_names) -> KernelWitness:
    proof_doc = doc["image_proof"]
    product = None
    if "product" in proof_doc:
        product = _cp_from_json(proof_doc["product"], target_names)
    return KernelWitness(
        parse_word(doc["word"], g_names),
        _nontriviality_from_json(doc["nontriviality"], g_names),
        ImageTrivialityProof(proof_doc["kind"], product))


def _inverse_to_json(iw: InverseWitness, g_names) -> dict:
    return {
        "psi_images": [spell_letters(w, g_names) for w in iw.psi_images],
        "relator_proofs": [_cp_to_json(cp, g_names) for cp in iw.relator_proofs],
        "roundtrip_proofs": [_cp_to_json(cp, g_names)
                             for cp in iw.roundtrip_proofs],
    }


def _inverse_from_json(doc: dict, g_names) -> InverseWitness:
    return InverseWitness(
        tuple(parse_word(t, g_names) for t in doc["psi_images"]),
        tuple(_cp_from_json(d, g_names) for d in doc["relator_proofs"]),
        tuple(_cp_from_json(d, g_names) for d in doc["roundtrip_proofs"]))


def _obstruction_to_json(ob: Obstruction, g_names) -> dict:
    return {
        "obstruction": ob.kind,
        "invariants": _invariants_to_json(ob.invariants),
        "commutator_proofs": [_cp_to_json(cp, g_names)
                              for cp in ob.commutator_proofs],
        "exhaustive": ob.exhaustive,
        "detail": ob.detail,
    }


def _obstruction_from_json(doc: dict, g_names) -> Obstruction:
    return Obstruction(
        doc["obstruction"],
        invariants=_invariants_from_json(doc.get("invariants")),
        commutator_proofs=tuple(_cp_from_json(d, g_names)
                                for d in doc["commutator_proofs"]),
        exhaustive=doc.get("exhaustive", False),
        detail=doc.get("detail", ""))


def outcome_certificate_json(outcome: Outcome, G: Presentation) -> Optional[dict]:
    g_names = G.generator_names
    target_names = free_names(outcome.target_rank or 0)
    if outcome.kind == "isomorphic":
        cert = {
            "kind": "isomorphism",
            "phi_images": [spell_letters(w, target_names)
                           for w in outcome.phi.images],
        }
        cert.update(_inverse_to_json(outcome.inverse, g_names))
        return cert
    if outcome.kind == "not_isomorphic":
        if outcome.obstruction is not None:
            out = {"kind": "obstruction"}
            out.update(_obstruction_to_json(outcome.obstruction, g_names))
            return out
        out = {"kind": "kernel",
               "phi_images": [spell_letters(w, target_names)
                              for w in outcome.phi.images]}
        out.update(_kernel_to_json(outcome.kernel, g_names, target_names))
        return out
    if outcome.kernel is not None:  # inconclusive but carrying a witness
        out = {"kind": "kernel_unasserted",
               "phi_images": [spell_letters(w, target_names)
                              for w in outcome.phi.images]}
        out.update(_kernel_to_json(outcome.kernel, g_names, target_names))
        return out
    return None


def certificate_outcome_from_json(doc: Optional[dict], outcome_doc: dict,
                                  G: Presentation) -> Outcome:
    """Rebuild an Outcome (certificates included) from document pieces."""
    kind = outcome_doc["kind"]
    target_rank = outcome_doc.get("target_rank")
    hopfian = outcome_doc.get("hopfian_asserted", True)
    g_names = G.generator_names
    target_names = free_names(target_rank or 0)
    phi = None
    inverse = None
    obstruction = None
    kernel = None
    if doc is not None:
        if "phi_images" in doc:
            phi = GroupHom(G, target_rank,
                           tuple(parse_word(t, target_names)
                                 for t in doc["phi_images"]))
        cert_kind = doc.get("kind")
        if cert_kind == "isomorphism":
            inverse = _inverse_from_json(doc, g_names)
        elif cert_kind == "obstruction":
            obstruction = _obstruction_from_json(doc, g_names)
        elif cert_kind in ("kernel", "kernel_unasserted"):
            kernel = _kernel_from_json(doc, g_names, target_names)
    return Outcome(kind, target_rank=target_rank, phi=phi, inverse=inverse,
                   obstruction=obstruction, kernel=kernel,
                   hopfian_asserted=hopfian,
                   report=outcome_doc.get("budget_report", {}))


def _base_document(command: str, p: Presentation, budget: Budget,
                   rewriting_system: Optional[RewritingSystem]) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "presentation": presentation_text(p),
        "budgets": budget_to_json(budget),
    }
    if rewriting_system is not None:
        doc["rewriting_system"] = dump_rewriting_system(
            rewriting_system, p.generator_names)
    return doc


def _input_hash(doc: dict) -> str:
    key = json.dumps(
        {"command": doc["command"], "presentation": doc["presentation"],
         "target_rank": doc.get("target_rank"), "word": doc.get("word"),
         "budgets": doc["budgets"],
         "rewriting_system": doc.get("rewriting_system")},
        sort_keys=True)
    return hashlib.sha256(key.encode()).hexdigest()[:16]


def decide_document(p: Presentation, n: int, budget: Budget, outcome: Outcome,
                    rewriting_system: Optional[RewritingSystem] = None) -> dict:
    doc = _base_document("decide-free", p, budget, rewriting_system)
    doc["target_rank"] = n
    doc["input_hash"] = _input_hash(doc)
    doc["outcome"] = {"kind": outcome.kind, "target_rank": n,
                      "hopfian_asserted": outcome.hopfian_asserted}
    doc["certificate"] = outcome_certificate_json(outcome, p)
    doc["budget_report"] = outcome.report
    return doc


def embed_document(p: Presentation, n: int, budget: Budget,
                   outcome: EmbedOutcome,
                   rewriting_system: Optional[RewritingSystem] = None) -> dict:
    doc = _base_document("embed-free", p, budget, rewriting_system)
    doc["target_rank"] = n
    doc["input_hash"] = _input_hash(doc)
    doc["outcome"] = {"kind": outcome.kind, "target_rank": n,
                      "embed_rank": outcome.embed_rank}
    per_rank = {}
    for r, sub in sorted(outcome.per_rank.items()):
        per_rank[str(r)] = {
            "outcome": {"kind": sub.kind, "target_rank": r,
                        "hopfian_asserted": sub.hopfian_asserted},
            "certificate": outcome_certificate_json(sub, p),
            "budget_report": sub.report,
        }
    doc["certificate"] = {"kind": "embedding", "per_rank": per_rank}
    doc["budget_report"] = {str(r): sub.report
                            for r, sub in sorted(outcome.per_rank.items())}
    return doc


def wp_document(p: Presentation, word_text: str, budget: Budget,
                answer: OracleAnswer,
                rewriting_system: Optional[RewritingSystem] = None) -> dict:
    doc = _base_document("wp", p, budget, rewriting_system)
    doc["word"] = word_text
    doc["input_hash"] = _input_hash(doc)
    doc["outcome"] = {"kind": answer.kind}
    names = p.generator_names
    if answer.is_trivial:
        doc["certificate"] = {"kind": "conjugate_product",
                              **_cp_to_json(answer.certificate, names)}
    elif answer.is_nontrivial:
        doc["certificate"] = {"kind": "nontriviality",
                              **_nontriviality_to_json(answer.witness, names)}
    else:
        doc["certificate"] = None
    doc["budget_report"] = {"search_units": answer.units_spent}
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
