"""Periodic treequences from integer weights.

Given an exact integer weight with W(v1) > 0, build a finite carrier K
with |K(v)| = W(v) points over each vertex v and a right action of the
free group on K whose every s-step follows an edge of positive weight.
The expansion of (K, action, labeling, basepoint) is then a periodic
point of the subshift with value v1 at the identity.

The construction makes three choices the equations leave open (the
out-partition of K(v), the in-partition of K(w), and the bijections
between matched classes); all three are fixed lexicographically so the
output is reproducible: classes take index ranges in ascending vertex
order and the bijections are the order-preserving ones.
"""

from __future__ import annotations

from fractions import Fraction

from .subshift import ConstraintGraph, PeriodicTreequence, Vertex, make_periodic
from .weights import EmpiricalMeasure, Weight, check_weight

CARRIER_CAP = 10**6


def synthesize(
    graph: ConstraintGraph,
    weight: Weight,
    v1: Vertex,
    carrier_cap: int = CARRIER_CAP,
) -> PeriodicTreequence:
    """Periodic treequence with x(id) = v1 realizing the weight as counts:
    |labeling^-1(v)| = W(v), and for every letter s the number of carrier
    points over v whose s-step lands over w is W(v, w; s)."""
    report = check_weight(weight)
    if not report.ok:
        raise ValueError(f"not a weight: {report}")
    values = list(weight.vertex_weights.values()) + list(weight.edge_weights.values())
    if any(Fraction(v).denominator != 1 for v in values):
        raise ValueError("weight must be integer valued; scale_to_integer first")
    if weight.vertex(v1) <= 0:
        raise ValueError(f"W({v1!r}) must be positive")

    gens = graph.generators
    order = [v for v in graph.vertices if weight.vertex(v) > 0]
    counts = {v: int(weight.vertex(v)) for v in order}
    total = sum(counts.values())
    if total > carrier_cap:
        raise ValueError(f"carrier size {total} exceeds cap {carrier_cap}")

    base = {}
    offset = 0
    for v in order:
        base[v] = offset
        offset += counts[v]

    # K(v) is the index range [base[v], base[v] + W(v)).  For each positive
    # letter, carve the source range into out-classes and the target range
    # into in-classes, both in ascending vertex order, and glue them with
    # order-preserving bijections.
    positive_action: list[list[int]] = []
    for s in gens.positive:
        perm = [-1] * total
        in_cursor = {v: base[v] for v in order}
        for v in order:
            cursor = base[v]
            for w in order:
                count = int(weight.edge(v, w, s))
                if count < 0:
                    raise ValueError("negative edge weight")
                if count == 0:
                    continue
                if not graph.has_edge(v, w, s):
                    raise ValueError(f"positive weight on missing edge {(v, w, s)!r}")
                start_in = in_cursor[w]
                for i in range(count):
                    perm[cursor + i] = start_in + i
                cursor += count
                in_cursor[w] = start_in + count
            if cursor != base[v] + counts[v]:
                raise ValueError(
                    f"out-classes at ({v!r}, {gens.symbol(s)}) cover {cursor - base[v]} "
                    f"of {counts[v]} carrier points; weight equations violated"
                )
        for v in order:
            if in_cursor[v] != base[v] + counts[v]:
                raise ValueError(
                    f"in-classes at ({v!r}, {gens.symbol(s)}) cover "
                    f"{in_cursor[v] - base[v]} of {counts[v]} carrier points"
                )
        positive_action.append(perm)

    labeling = [v for v in order for _ in range(counts[v])]
    return make_periodic(graph, positive_action, labeling, basepoint=base[v1])


def frequency_of(p: PeriodicTreequence) -> EmpiricalMeasure:
    """Normalized carrier counts: the cylinder frequencies of the uniform
    measure on the expansion's orbit.  Round-trips synthesize exactly."""
    from .subshift import verify_periodic

    if not verify_periodic(p):
        raise ValueError("not a valid periodic treequence")
    gens = p.graph.generators
    n = Fraction(p.size)
    vertex_freq: dict[Vertex, Fraction] = {}
    for v in p.labeling:
        vertex_freq[v] = vertex_freq.get(v, Fraction(0)) + 1
    vertex_freq = {v: c / n for v, c in vertex_freq.items()}
    edge_freq: dict[tuple[Vertex, Vertex, int], Fraction] = {}
    for k in range(p.size):
        for s in gens.letters:
            e = (p.labeling[k], p.labeling[p.step(k, s)], s)
            edge_freq[e] = edge_freq.get(e, Fraction(0)) + 1
    edge_freq = {e: c / n for e, c in edge_freq.items()}
    return EmpiricalMeasure(vertex_freq, edge_freq)
