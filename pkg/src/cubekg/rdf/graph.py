"""Indexed in-memory triple set with pattern matching.

The graph keeps three permutation indexes (subject-, predicate- and
object-first) so any bound/unbound combination of a pattern resolves
through a dictionary walk instead of a full scan.  Insertion has set
semantics.  The intended concurrency regime is snapshot-on-load: an ETL
run builds a graph privately, then hands it over to readers that never
mutate it.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import count
from typing import Iterable, Iterator

from .namespaces import WELL_KNOWN_PREFIXES
from .terms import (
    BlankNode,
    Iri,
    Literal,
    PatternTerm,
    SubjectTerm,
    Term,
    Triple,
    TriplePattern,
    Variable,
)

Binding = dict[str, Term]


class Graph:
    def __init__(self, triples: Iterable[Triple] = (), prefixes: dict[str, str] | None = None):
        self._triples: set[Triple] = set()
        # index[a][b] -> set of third components, one per permutation
        self._spo: dict[SubjectTerm, dict[Iri, set[Term]]] = defaultdict(lambda: defaultdict(set))
        self._pos: dict[Iri, dict[Term, set[SubjectTerm]]] = defaultdict(lambda: defaultdict(set))
        self._osp: dict[Term, dict[SubjectTerm, set[Iri]]] = defaultdict(lambda: defaultdict(set))
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self._bnode_counter = count()
        for t in triples:
            self.insert(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def insert(self, t: Triple) -> "Graph":
        if not isinstance(t, Triple):
            raise TypeError(f"expected Triple, got {type(t).__name__}")
        if t not in self._triples:
            self._triples.add(t)
            self._spo[t.subject][t.predicate].add(t.object)
            self._pos[t.predicate][t.object].add(t.subject)
            self._osp[t.object][t.subject].add(t.predicate)
        return self

    def add(self, subject: SubjectTerm, predicate: Iri, obj: Term) -> "Graph":
        return self.insert(Triple(subject, predicate, obj))

    def extend(self, triples: Iterable[Triple]) -> "Graph":
        for t in triples:
            self.insert(t)
        return self

    def merge(self, other: "Graph") -> "Graph":
        """Set-union *other* into this graph; prefixes from *other* win on clash."""
        self.extend(other)
        self.prefixes.update(other.prefixes)
        return self

    def copy(self) -> "Graph":
        return Graph(self._triples, self.prefixes)

    def bind(self, prefix: str, namespace: str) -> None:
        self.prefixes[prefix] = namespace

    def fresh_bnode(self) -> BlankNode:
        return BlankNode(f"b{next(self._bnode_counter)}")

    # -- lookups ---------------------------------------------------------

    def triples(
        self,
        subject: SubjectTerm | None = None,
        predicate: Iri | None = None,
        obj: Term | None = None,
    ) -> Iterator[Triple]:
        """Iterate triples matching the given ground slots (None = wildcard)."""
        s, p, o = subject, predicate, obj
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return
            preds = [p] if p is not None else list(by_p)
            for pred in preds:
                for ob in by_p.get(pred, ()):
                    if o is None or ob == o:
                        yield Triple(s, pred, ob)
        elif p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return
            objs = [o] if o is not None else list(by_o)
            for ob in objs:
                for subj in by_o.get(ob, ()):
                    yield Triple(subj, p, ob)
        elif o is not None:
            by_s = self._osp.get(o)
            if not by_s:
                return
            for subj, preds in by_s.items():
                for pred in preds:
                    yield Triple(subj, pred, o)
        else:
            yield from self._triples

    def subjects(self, predicate: Iri | None = None, obj: Term | None = None) -> Iterator[SubjectTerm]:
        seen = set()
        for t in self.triples(None, predicate, obj):
            if t.subject not in seen:
                seen.add(t.subject)
                yield t.subject

    def objects(self, subject: SubjectTerm | None = None, predicate: Iri | None = None) -> Iterator[Term]:
        seen = set()
        for t in self.triples(subject, predicate, None):
            if t.object not in seen:
                seen.add(t.object)
                yield t.object

    def value(self, subject: SubjectTerm, predicate: Iri) -> Term | None:
        """First object for (subject, predicate), or None."""
        for t in self.triples(subject, predicate, None):
            return t.object
        return None

    def match(self, pattern: TriplePattern) -> Iterator[Binding]:
        """Yield one variable-binding dict per triple unifying with *pattern*.

        Repeated variables must unify; ground slots must match exactly.
        """
        def ground(slot: PatternTerm) -> Term | None:
            return None if isinstance(slot, Variable) else slot

        for t in self.triples(ground(pattern.subject), ground(pattern.predicate), ground(pattern.object)):
            binding: Binding = {}
            ok = True
            for slot, value in ((pattern.subject, t.subject),
                                (pattern.predicate, t.predicate),
                                (pattern.object, t.object)):
                if isinstance(slot, Variable):
                    if slot.name in binding and binding[slot.name] != value:
                        ok = False
                        break
                    binding[slot.name] = value
            if ok:
                yield binding

    def predicates_used(self) -> set[Iri]:
        return set(self._pos)

    def contains_resource(self, term: Term) -> bool:
        """True when *term* occurs in any subject or object position."""
        return term in self._spo or term in self._osp


def _ground_part(g: Graph) -> set[Triple]:
    return {t for t in g
            if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}


def _bnodes(g: Graph) -> set[BlankNode]:
    nodes = set()
    for t in g:
        if isinstance(t.subject, BlankNode):
            nodes.add(t.subject)
        if isinstance(t.object, BlankNode):
            nodes.add(t.object)
    return nodes


def _signature(g: Graph, node: BlankNode, labels: dict[BlankNode, int]) -> tuple:
    out = sorted(
        (t.predicate.value,
         ("b", labels[t.object]) if isinstance(t.object, BlankNode) else ("g", t.object.n3()))
        for t in g.triples(subject=node)
    )
    inc = sorted(
        (t.predicate.value,
         ("b", labels[t.subject]) if isinstance(t.subject, BlankNode) else ("g", t.subject.n3()))
        for t in g.triples(obj=node)
    )
    return (tuple(out), tuple(inc))


def isomorphic(a: Graph, b: Graph) -> bool:
    """True when the graphs are equal up to a blank-node bijection."""
    if len(a) != len(b):
        return False
    if _ground_part(a) != _ground_part(b):
        return False
    na, nb = sorted(_bnodes(a), key=str), sorted(_bnodes(b), key=str)
    if len(na) != len(nb):
        return False
    if not na:
        return True

    # iterative refinement: color nodes by local signature until stable
    la = {n: 0 for n in na}
    lb = {n: 0 for n in nb}
    for _ in range(len(na) + 1):
        sig_a = {n: _signature(a, n, la) for n in na}
        sig_b = {n: _signature(b, n, lb) for n in nb}
        palette = {s: i for i, s in enumerate(sorted(set(sig_a.values()) | set(sig_b.values())))}
        new_la = {n: palette[sig_a[n]] for n in na}
        new_lb = {n: palette[sig_b[n]] for n in nb}
        if new_la == la and new_lb == lb:
            break
        la, lb = new_la, new_lb
    if sorted(la.values()) != sorted(lb.values()):
        return False

    # backtracking search over color-compatible candidates
    order = sorted(na, key=lambda n: (la[n], str(n)))
    candidates = {n: [m for m in nb if lb[m] == la[n]] for n in na}

    def rewrite(t: Triple, mapping: dict[BlankNode, BlankNode]) -> Triple:
        s = mapping.get(t.subject, t.subject) if isinstance(t.subject, BlankNode) else t.subject
        o = mapping.get(t.object, t.object) if isinstance(t.object, BlankNode) else t.object
        return Triple(s, t.predicate, o)

    def consistent(mapping: dict[BlankNode, BlankNode]) -> bool:
        mapped = set(mapping)
        for t in a:
            sb = isinstance(t.subject, BlankNode)
            ob = isinstance(t.object, BlankNode)
            if (not sb or t.subject in mapped) and (not ob or t.object in mapped) and (sb or ob):
                if rewrite(t, mapping) not in b:
                    return False
        return True

    def search(i: int, mapping: dict[BlankNode, BlankNode], used: set[BlankNode]) -> bool:
        if i == len(order):
            return True
        node = order[i]
        for cand in candidates[node]:
            if cand in used:
                continue
            mapping[node] = cand
            if consistent(mapping) and search(i + 1, mapping, used | {cand}):
                return True
            del mapping[node]
        return False

    return search(0, {}, set())


def graph_with_standard_prefixes() -> Graph:
    return Graph(prefixes=dict(WELL_KNOWN_PREFIXES))
