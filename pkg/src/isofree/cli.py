"""Command-line front end.

Subcommands: decide-free, embed-free, epi-search, wp, fold, abelian, kb,
verify.  Exit codes: 0 for a definitive outcome, 2 for an inconclusive
one, 1 for usage or parse errors.  Output is a tree-structured text form
by default or a JSON document with --json; under --reproducible the
timing field is suppressed so identical invocations produce identical
bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import textio, verify as verify_mod
from .decision import decide_free, embeds_in_free
from .hom_search import find_epimorphism
from .presentation import abelian_invariants, free_names
from .stallings import build_graph
from .word_problem import Budget, WordOracle, knuth_bendix
from .words import Word

EXIT_DEFINITIVE = 0
EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 2


def _budget_args(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("budgets")
    g.add_argument("--max-image-len", type=int, default=2,
                   help="max length of each candidate image word (default 2)")
    g.add_argument("--max-word-len", type=int, default=6,
                   help="max length of enumerated domain words (default 6)")
    g.add_argument("--max-tuples", type=int, default=100_000,
                   help="max candidate tuples per search (default 100000)")
    g.add_argument("--max-cert-terms", type=int, default=4,
                   help="max terms in a triviality certificate (default 4)")
    g.add_argument("--quantum", type=int, default=1,
                   help="scheduler steps per procedure per turn (default 1)")
    g.add_argument("--max-conj-len", type=int, default=3,
                   help="max conjugator length in certificate search (default 3)")
    g.add_argument("--max-states", type=int, default=4000,
                   help="work cap of one decisive certificate search (default 4000)")
    g.add_argument("--max-oracle-states", type=int, default=150,
                   help="work cap of per-word probes during enumeration (default 150)")
    g.add_argument("--kb-max-rules", type=int, default=200,
                   help="rule cap for Knuth-Bendix completion (default 200)")
    g.add_argument("--kb-max-rule-len", type=int, default=16,
                   help="rule length cap for Knuth-Bendix completion (default 16)")


def _common_args(parser: argparse.ArgumentParser):
    parser.add_argument("--json", action="store_true",
                        help="emit the JSON document instead of text")
    parser.add_argument("--reproducible", action="store_true",
                        help="suppress timing fields for byte-identical output")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker count; outcomes are identical for any "
                             "value (execution is the deterministic schedule)")
    parser.add_argument("--rs", type=Path, default=None,
                        help="rewriting-system fixture to use as a total "
                             "word-problem backend (audited before use)")
    _budget_args(parser)


def _budget_from(args) -> Budget:
    return Budget(
        max_certificate_terms=args.max_cert_terms,
        max_conjugator_length=args.max_conj_len,
        max_word_length=args.max_word_len,
        max_image_length=args.max_image_len,
        max_tuples=args.max_tuples,
        kb_max_rules=args.kb_max_rules,
        kb_max_rule_length=args.kb_max_rule_len,
        quantum=args.quantum,
        max_search_states=args.max_states,
        max_oracle_states=args.max_oracle_states,
    )


def _load_presentation(path: Path):
    return textio.parse_presentation(path.read_text())


def _load_system(args, p):
    if args.rs is None:
        return None
    return textio.load_rewriting_system(args.rs.read_text(),
                                        p.generator_names)


def _finish(doc: dict, args, text_lines: list[str], exit_code: int) -> int:
    if not args.reproducible:
        doc["elapsed_ms"] = doc.get("elapsed_ms", 0)
    if args.json:
        sys.stdout.write(textio.dump_document(doc))
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")
    return exit_code


def _tree(lines: list[str], label: str, value=None, depth: int = 0):
    pad = "  " * depth
    if value is None:
        lines.append(f"{pad}{label}:")
    else:
        lines.append(f"{pad}{label}: {value}")


def _outcome_lines(doc: dict) -> list[str]:
    lines: list[str] = []
    _tree(lines, "outcome", doc["outcome"]["kind"])
    if "target_rank" in doc:
        _tree(lines, "target-rank", doc["target_rank"])
    cert = doc.get("certificate")
    if cert:
        _tree(lines, "certificate")
        _cert_lines(lines, cert, 1)
    report = doc.get("budget_report")
    if report:
        _tree(lines, "budget-report")
        _report_lines(lines, report, 1)
    return lines


def _cert_lines(lines: list[str], cert, depth: int):
    if isinstance(cert, dict):
        for key in sorted(cert):
            value = cert[key]
            if isinstance(value, (dict, list)):
                _tree(lines, key, None, depth)
                _cert_lines(lines, value, depth + 1)
            else:
                _tree(lines, key, value, depth)
    elif isinstance(cert, list):
        for i, value in enumerate(cert):
            if isinstance(value, (dict, list)):
                _tree(lines, str(i), None, depth)
                _cert_lines(lines, value, depth + 1)
            else:
                _tree(lines, str(i), value, depth)


def _report_lines(lines: list[str], report: dict, depth: int):
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            _tree(lines, key, None, depth)
            _report_lines(lines, value, depth + 1)
        else:
            _tree(lines, key, value, depth)


def _cmd_decide_free(args) -> int:
    p = _load_presentation(args.presentation)
    budget = _budget_from(args)
    system = _load_system(args, p)
    started = time.monotonic()
    outcome = decide_free(p, args.rank, budget, system)
    doc = textio.decide_document(p, args.rank, budget, outcome, system)
    if not args.reproducible:
        doc["elapsed_ms"] = round(1000 * (time.monotonic() - started), 3)
    code = EXIT_DEFINITIVE if outcome.definitive else EXIT_INCONCLUSIVE
    return _finish(doc, args, _outcome_lines(doc), code)


def _cmd_embed_free(args) -> int:
    p = _load_presentation(args.presentation)
    budget = _budget_from(args)
    system = _load_system(args, p)
    started = time.monotonic()
    outcome = embeds_in_free(p, args.rank, budget, system)
    doc = textio.embed_document(p, args.rank, budget, outcome, system)
    if not args.reproducible:
        doc["elapsed_ms"] = round(1000 * (time.monotonic() - started), 3)
    lines = _outcome_lines(doc)
    if outcome.embed_rank is not None:
        lines.insert(1, f"embed-rank: {outcome.embed_rank}")
    code = EXIT_DEFINITIVE if outcome.kind != "inconclusive" else EXIT_INCONCLUSIVE
    return _finish(doc, args, lines, code)


def _cmd_epi_search(args) -> int:
    p = _load_presentation(args.presentation)
    budget = _budget_from(args)
    result = find_epimorphism(p, args.rank, budget)
    names = free_names(args.rank)
    lines = [f"result: {result.kind}", f"tuples-tried: {result.tuples_tried}"]
    doc = {
        "format_version": textio.FORMAT_VERSION,
        "command": "epi-search",
        "presentation": textio.presentation_text(p),
        "target_rank": args.rank,
        "budgets": textio.budget_to_json(budget),
        "outcome": {"kind": result.kind},
        "certificate": None,
        "budget_report": {"tuples_tried": result.tuples_tried},
    }
    doc["input_hash"] = textio._input_hash(doc)
    if result.kind == "found":
        witness = result.witness
        images = [textio.spell_letters(w, names) for w in witness.hom.images]
        doc["certificate"] = {"kind": "epimorphism", "images": images,
                              "image_rank": witness.image_rank}
        lines.append(f"image-rank: {witness.image_rank}")
        lines.append("images:")
        for name, img in zip(p.generator_names, images):
            lines.append(f"  {name} -> {img}")
        return _finish(doc, args, lines, EXIT_DEFINITIVE)
    return _finish(doc, args, lines, EXIT_INCONCLUSIVE)


def _cmd_wp(args) -> int:
    p = _load_presentation(args.presentation)
    budget = _budget_from(args)
    system = _load_system(args, p)
    oracle = WordOracle(p, budget, system)
    w = Word(textio.parse_letters(args.word, p.generator_names))
    answer = oracle.query(w, deep=True)
    doc = textio.wp_document(p, args.word, budget, answer, system)
    doc["input_hash"] = textio._input_hash(doc)
    lines = [f"word: {textio.spell_letters(w, p.generator_names)}",
             f"answer: {answer.kind}"]
    cert = doc.get("certificate")
    if cert:
        lines.append("certificate:")
        _cert_lines(lines, cert, 1)
    code = EXIT_DEFINITIVE if answer.kind != "unknown" else EXIT_INCONCLUSIVE
    return _finish(doc, args, lines, code)


def _cmd_fold(args) -> int:
    names = free_names(args.rank)
    words = [Word(textio.parse_letters(t.strip(), names))
             for t in args.words.split(",") if t.strip()]
    graph = build_graph(words, args.rank)
    basis = graph.basis()
    lines = [
        f"vertices: {graph.num_vertices}",
        f"edges: {graph.num_edges}",
        f"rank: {graph.rank()}",
        "basis:",
    ]
    for i, b in enumerate(basis):
        lines.append(f"  b{i + 1} = {textio.spell_letters(b, names)}")
    lines.append("edge-list:")
    for line in graph.edge_list():
        lines.append(f"  {line}")
    doc = {
        "format_version": textio.FORMAT_VERSION,
        "command": "fold",
        "rank": args.rank,
        "words": args.words,
        "outcome": {"kind": "folded", "rank": graph.rank(),
                    "vertices": graph.num_vertices, "edges": graph.num_edges},
        "certificate": {"basis": [textio.spell_letters(b, names) for b in basis],
                        "edge_list": graph.edge_list()},
        "budget_report": {},
        "budgets": {},
        "presentation": f"<{','.join(names)} | >" if names else "<|>",
    }
    doc["input_hash"] = textio._input_hash(doc)
    return _finish(doc, args, lines, EXIT_DEFINITIVE)


def _cmd_abelian(args) -> int:
    p = _load_presentation(args.presentation)
    inv = abelian_invariants(p)
    lines = [f"free-rank: {inv.free_rank}",
             f"torsion: {list(inv.torsion)}"]
    doc = {
        "format_version": textio.FORMAT_VERSION,
        "command": "abelian",
        "presentation": textio.presentation_text(p),
        "budgets": {},
        "outcome": {"kind": "invariants", "free_rank": inv.free_rank,
                    "torsion": list(inv.torsion)},
        "certificate": None,
        "budget_report": {},
    }
    doc["input_hash"] = textio._input_hash(doc)
    return _finish(doc, args, lines, EXIT_DEFINITIVE)


def _cmd_kb(args) -> int:
    p = _load_presentation(args.presentation)
    budget = _budget_from(args)
    result = knuth_bendix(p, budget)
    doc = {
        "format_version": textio.FORMAT_VERSION,
        "command": "kb",
        "presentation": textio.presentation_text(p),
        "budgets": textio.budget_to_json(budget),
        "outcome": {"kind": result.kind, "iterations": result.iterations},
        "certificate": None,
        "budget_report": {"iterations": result.iterations},
    }
    doc["input_hash"] = textio._input_hash(doc)
    if result.kind == "success":
        fixture = textio.dump_rewriting_system(result.system, p.generator_names)
        doc["certificate"] = {"kind": "rewriting_system", "fixture": fixture,
                              "system_id": result.system.system_id}
        lines = fixture.strip().split("\n")
        return _finish(doc, args, lines, EXIT_DEFINITIVE)
    return _finish(doc, args, [f"result: {result.kind}"], EXIT_INCONCLUSIVE)


def _cmd_verify(args) -> int:
    doc = json.loads(Path(args.document).read_text())
    problems = verify_mod.verify_document(doc)
    if problems:
        for message in problems:
            print(f"FAIL: {message}")
        return EXIT_USAGE
    print(f"verified: {doc.get('command')} outcome "
          f"{doc.get('outcome', {}).get('kind')} replays cleanly")
    return EXIT_DEFINITIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isofree",
        description="Decide isomorphism to, and embedding into, free groups, "
                    "with replayable certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_decide = sub.add_parser("decide-free",
                              help="is the presented group free of rank n?")
    p_decide.add_argument("presentation", type=Path)
    p_decide.add_argument("-n", "--rank", type=int, required=True)
    _common_args(p_decide)
    p_decide.set_defaults(func=_cmd_decide_free)

    p_embed = sub.add_parser("embed-free",
                             help="does the presented group embed in F_n (n >= 2)?")
    p_embed.add_argument("presentation", type=Path)
    p_embed.add_argument("-n", "--rank", type=int, default=2)
    _common_args(p_embed)
    p_embed.set_defaults(func=_cmd_embed_free)

    p_epi = sub.add_parser("epi-search",
                           help="search for an epimorphism onto a rank-n subgroup")
    p_epi.add_argument("presentation", type=Path)
    p_epi.add_argument("-n", "--rank", type=int, required=True)
    _common_args(p_epi)
    p_epi.set_defaults(func=_cmd_epi_search)

    p_wp = sub.add_parser("wp", help="query the word-problem oracle")
    p_wp.add_argument("presentation", type=Path)
    p_wp.add_argument("--word", required=True)
    _common_args(p_wp)
    p_wp.set_defaults(func=_cmd_wp)

    p_fold = sub.add_parser("fold",
                            help="fold the subgroup graph of a word tuple")
    p_fold.add_argument("--rank", type=int, required=True)
    p_fold.add_argument("--words", required=True,
                        help="comma-separated words over x,y,z,... ")
    _common_args(p_fold)
    p_fold.set_defaults(func=_cmd_fold)

    p_ab = sub.add_parser("abelian", help="abelianization invariants")
    p_ab.add_argument("presentation", type=Path)
    _common_args(p_ab)
    p_ab.set_defaults(func=_cmd_abelian)

    p_kb = sub.add_parser("kb", help="Knuth-Bendix completion")
    p_kb.add_argument("presentation", type=Path)
    _common_args(p_kb)
    p_kb.set_defaults(func=_cmd_kb)

    p_verify = sub.add_parser("verify",
                              help="replay the certificates in a JSON document")
    p_verify.add_argument("document", type=Path)
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (textio.ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
