"""Constraint graphs and their subshifts over a free group.

A constraint graph is a directed multigraph with edges labeled by the
letters of a symmetric free generating set.  It determines the space of
treequences x: F -> V in which every generator step follows an edge with
the matching label.  Multi-edges with identical (from, to, label) collapse
to a single edge: the subshift only sees edge existence.

A periodic treequence is certified by a finite carrier with a right
F-action; the finite verification here is exactly membership of the
expanded infinite treequence in the subshift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .freegroup import (
    GeneratorSet,
    IDENTITY,
    Word,
    ball,
    concat,
    inverse,
    reduce,
)

Vertex = Hashable
Edge = tuple[Vertex, Vertex, int]  # (from, to, letter)


@dataclass(frozen=True)
class ConstraintGraph:
    """Labeled multigraph (V, E) with symmetric closure as an invariant:
    (v, w; s) in E  iff  (w, v; s^-1) in E."""

    generators: GeneratorSet
    vertices: tuple[Vertex, ...]
    edges: frozenset[Edge]

    @staticmethod
    def build(
        generators: GeneratorSet,
        vertices: Iterable[Vertex],
        edges: Iterable[Edge],
        close: bool = False,
    ) -> "ConstraintGraph":
        """Construct a graph; with ``close=True`` the symmetric closure is
        completed automatically instead of being required of the input."""
        vs = tuple(sorted(set(vertices), key=repr))
        es = set(edges)
        if close:
            gens = generators
            es |= {(w, v, gens.inverse(s)) for (v, w, s) in es}
        return ConstraintGraph(generators, vs, frozenset(es))

    def has_edge(self, v: Vertex, w: Vertex, letter: int) -> bool:
        return (v, w, letter) in self.edges

    def out_targets(self, v: Vertex, letter: int) -> list[Vertex]:
        return sorted((w for (a, w, s) in self.edges if a == v and s == letter), key=repr)

    def in_sources(self, w: Vertex, letter: int) -> list[Vertex]:
        return sorted((v for (v, b, s) in self.edges if b == w and s == letter), key=repr)


@dataclass
class GraphReport:
    """Outcome of validate_graph."""

    ok: bool
    missing_closure: list[Edge] = field(default_factory=list)
    bad_labels: list[Edge] = field(default_factory=list)
    bad_vertices: list[Edge] = field(default_factory=list)
    # vertices with no outgoing edge for some letter; weights there are
    # forced to zero but the graph is still valid
    dead_directions: list[tuple[Vertex, int]] = field(default_factory=list)


def validate_graph(graph: ConstraintGraph) -> GraphReport:
    gens = graph.generators
    vset = set(graph.vertices)
    if len(vset) != len(graph.vertices):
        raise ValueError("duplicate vertex ids")
    report = GraphReport(ok=True)
    for (v, w, s) in sorted(graph.edges, key=repr):
        if s not in gens.letters:
            report.bad_labels.append((v, w, s))
        if v not in vset or w not in vset:
            report.bad_vertices.append((v, w, s))
        if (w, v, gens.inverse(s)) not in graph.edges:
            report.missing_closure.append((v, w, s))
    for v in graph.vertices:
        for s in gens.letters:
            if not any(a == v and t == s for (a, _, t) in graph.edges):
                report.dead_directions.append((v, s))
    report.ok = not (report.missing_closure or report.bad_labels or report.bad_vertices)
    return report


@dataclass(frozen=True)
class Pattern:
    """A finite partial treequence: values on a finite word set."""

    graph: ConstraintGraph
    values: Mapping[Word, Vertex]

    @property
    def support(self) -> list[Word]:
        return sorted(self.values)

    def __getitem__(self, w: Word) -> Vertex:
        return self.values[w]

    def restricted(self, support: Iterable[Word]) -> "Pattern":
        keep = set(support)
        return Pattern(self.graph, {w: v for w, v in self.values.items() if w in keep})


def check_pattern(pattern: Pattern) -> bool:
    """True iff every generator step inside the support follows an edge."""
    graph = pattern.graph
    gens = graph.generators
    vals = pattern.values
    for w, v in vals.items():
        for s in gens.letters:
            nxt = reduce(gens, w.letters + (s,))
            if nxt in vals and not graph.has_edge(v, vals[nxt], s):
                return False
    return True


def shift(pattern: Pattern, g: Word) -> Pattern:
    """Shift action: (shift(p, g))(g f) = p(f); support becomes g * support."""
    gens = pattern.graph.generators
    return Pattern(
        pattern.graph,
        {concat(gens, g, w): v for w, v in pattern.values.items()},
    )


@dataclass(frozen=True)
class PeriodicTreequence:
    """Finite certificate of a periodic point of the subshift.

    ``action`` maps every letter to a permutation of ``range(size)`` given as
    an image tuple; inverse letters must act by the inverse permutation.  The
    infinite treequence it certifies is x(f) = labeling[basepoint . f].
    """

    graph: ConstraintGraph
    size: int
    action: Mapping[int, tuple[int, ...]]
    labeling: tuple[Vertex, ...]
    basepoint: int

    def step(self, k: int, letter: int) -> int:
        return self.action[letter][k]

    def walk(self, k: int, letters: Iterable[int]) -> int:
        for ltr in letters:
            k = self.action[ltr][k]
        return k

    def value(self, w: Word) -> Vertex:
        return self.labeling[self.walk(self.basepoint, w.letters)]


def make_periodic(
    graph: ConstraintGraph,
    positive_action: Sequence[Sequence[int]],
    labeling: Sequence[Vertex],
    basepoint: int = 0,
) -> PeriodicTreequence:
    """Build a treequence from permutations for the positive letters only;
    inverse letters act by the inverse permutations."""
    gens = graph.generators
    size = len(labeling)
    action: dict[int, tuple[int, ...]] = {}
    for i, perm in enumerate(positive_action):
        perm = tuple(perm)
        if sorted(perm) != list(range(size)):
            raise ValueError(f"action for letter {i} is not a permutation")
        inv = [0] * size
        for k, img in enumerate(perm):
            inv[img] = k
        action[i] = perm
        action[gens.inverse(i)] = tuple(inv)
    return PeriodicTreequence(graph, size, action, tuple(labeling), basepoint)


def verify_periodic(p: PeriodicTreequence) -> bool:
    """Finite check certifying that the expanded treequence lies in the
    subshift: permutation actions, inverse compatibility, and the edge
    condition at every (carrier point, letter)."""
    gens = p.graph.generators
    if p.size <= 0 or not 0 <= p.basepoint < p.size:
        return False
    if len(p.labeling) != p.size:
        return False
    ident = list(range(p.size))
    for s in gens.letters:
        perm = p.action.get(s)
        if perm is None or sorted(perm) != ident:
            return False
    for s in gens.positive:
        inv = p.action[gens.inverse(s)]
        if any(inv[p.action[s][k]] != k for k in range(p.size)):
            return False
    for k in range(p.size):
        for s in gens.letters:
            if not p.graph.has_edge(p.labeling[k], p.labeling[p.step(k, s)], s):
                return False
    return True


def expand_periodic(p: PeriodicTreequence, radius: int) -> Pattern:
    """Pattern on ball(radius) with x(f) = labeling[basepoint . f]."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    gens = p.graph.generators
    values: dict[Word, Vertex] = {IDENTITY: p.labeling[p.basepoint]}
    carrier: dict[Word, int] = {IDENTITY: p.basepoint}
    frontier = [IDENTITY]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            k = carrier[w]
            forbidden = gens.inverse(w.letters[-1]) if w.letters else None
            for s in gens.letters:
                if s == forbidden:
                    continue
                w2 = Word(w.letters + (s,))
                k2 = p.step(k, s)
                carrier[w2] = k2
                values[w2] = p.labeling[k2]
                nxt.append(w2)
        frontier = nxt
    return Pattern(p.graph, values)


def orbit_of_basepoint(p: PeriodicTreequence) -> tuple[list[int], dict[int, Word]]:
    """BFS orbit of the basepoint under the action, trying letters in
    increasing order; returns (orbit in discovery order, coset
    representatives as words)."""
    gens = p.graph.generators
    reps: dict[int, Word] = {p.basepoint: IDENTITY}
    order = [p.basepoint]
    queue = [p.basepoint]
    while queue:
        k = queue.pop(0)
        for s in gens.letters:
            k2 = p.step(k, s)
            if k2 not in reps:
                reps[k2] = Word(reps[k].letters + (s,))
                order.append(k2)
                queue.append(k2)
    return order, reps


def stabilizer_index(p: PeriodicTreequence) -> tuple[int, list[Word]]:
    """Orbit size of the basepoint (= index of its stabilizer subgroup) and
    a Schreier generating set for the stabilizer.

    Representatives come from the breadth-first spanning tree with smallest
    labels, so the output is deterministic.  Generators that are exact
    inverses of earlier ones are dropped.
    """
    if not verify_periodic(p):
        raise ValueError("not a valid periodic treequence")
    gens = p.graph.generators
    order, reps = orbit_of_basepoint(p)
    schreier: list[Word] = []
    seen: set[tuple[int, ...]] = set()
    for k in order:
        for s in gens.letters:
            k2 = p.step(k, s)
            # u_k s u_{k2}^-1, reduced; spanning-tree edges give the identity
            g = concat(gens, Word(reps[k].letters + (s,)), inverse(gens, reps[k2]))
            g = min(g, inverse(gens, g))
            if not g or g.letters in seen:
                continue
            seen.add(g.letters)
            schreier.append(g)
    return len(order), schreier
