"""Graph isomorphism under blank-node relabeling.

Two graphs are isomorphic when some bijection over blank-node labels maps
one exactly onto the other. Ground triples must match as-is; the blank
bijection is found by iterative signature refinement followed by a small
backtracking search within signature classes. The graphs this portal
compares (record graphs, round-trip fixtures) carry at most a few dozen
blanks, so the search space stays tiny.
"""

from __future__ import annotations

from itertools import permutations

from .ntriples import term_to_ntriples
from .terms import BlankNode, Graph, Term, Triple


def _ground_key(term: Term) -> str:
    return "*" if isinstance(term, BlankNode) else term_to_ntriples(term)


def _signatures(graph: Graph, rounds: int = 4) -> dict[str, str]:
    """Stable per-blank-label signature, refined over a few rounds."""
    labels = graph.blank_labels()
    sig = {label: "" for label in labels}
    for _ in range(rounds):
        nxt: dict[str, list[str]] = {label: [] for label in labels}
        for t in graph:
            s_blank = isinstance(t.subject, BlankNode)
            o_blank = isinstance(t.object, BlankNode)
            if s_blank:
                other = sig[t.object.label] if o_blank else _ground_key(t.object)
                nxt[t.subject.label].append(f"S|{t.predicate.value}|{other}")
            if o_blank:
                other = sig[t.subject.label] if s_blank else _ground_key(t.subject)
                nxt[t.object.label].append(f"O|{t.predicate.value}|{other}")
        sig = {label: "&".join(sorted(parts)) for label, parts in nxt.items()}
    return sig


def _apply(triple: Triple, mapping: dict[str, str]) -> Triple:
    s, o = triple.subject, triple.object
    if isinstance(s, BlankNode):
        s = BlankNode(mapping[s.label])
    if isinstance(o, BlankNode):
        o = BlankNode(mapping[o.label])
    return Triple(s, triple.predicate, o)


def graph_isomorphic(a: Graph, b: Graph) -> bool:
    if len(a) != len(b):
        return False

    a_ground = {t for t in a if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    b_ground = {t for t in b if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    if a_ground != b_ground:
        return False

    a_blank_triples = [t for t in a if t not in a_ground]
    b_blank_triples = {t for t in b if t not in b_ground}

    sig_a = _signatures(a)
    sig_b = _signatures(b)
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return False

    classes: dict[str, tuple[list[str], list[str]]] = {}
    for label, s in sig_a.items():
        classes.setdefault(s, ([], []))[0].append(label)
    for label, s in sig_b.items():
        classes.setdefault(s, ([], []))[1].append(label)

    class_pairs = []
    for a_labels, b_labels in classes.values():
        if len(a_labels) != len(b_labels):
            return False
        class_pairs.append((sorted(a_labels), sorted(b_labels)))

    def search(idx: int, mapping: dict[str, str]) -> bool:
        if idx == len(class_pairs):
            mapped = {_apply(t, mapping) for t in a_blank_triples}
            return mapped == b_blank_triples
        a_labels, b_labels = class_pairs[idx]
        for perm in permutations(b_labels):
            mapping.update(zip(a_labels, perm))
            if search(idx + 1, mapping):
                return True
        for label in a_labels:
            mapping.pop(label, None)
        return False

    return search(0, {})
