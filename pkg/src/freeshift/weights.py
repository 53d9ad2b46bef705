"""Exact rational weights on constraint graphs.

A weight assigns a nonnegative rational to every vertex and every labeled
edge so that, for each vertex v and letter s, the weight of v equals both
the total weight of s-labeled edges out of v and the total weight of
s-labeled edges into v, and paired edges carry equal weight:

    W(v) = sum_w W(v, w; s) = sum_w W(w, v; s)          (flow balance)
    W(v, w; s) = W(w, v; s^-1)                          (inverse symmetry)

Everything here is exact Fraction arithmetic; there are no tolerances.
Feasibility is decided by a phase-1 simplex with Bland's rule, and a
negative answer carries a verified Farkas certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .rationallp import FarkasCertificate, solve_feasibility
from .subshift import ConstraintGraph, Edge, Vertex, validate_graph

ZERO = Fraction(0)


@dataclass(frozen=True)
class Weight:
    """Nonnegative rational function on vertices and edges of a graph.

    Edge values are stored sparsely; edges of the graph absent from the
    mapping have weight zero.  Instances are immutable.
    """

    graph: ConstraintGraph
    vertex_weights: Mapping[Vertex, Fraction]
    edge_weights: Mapping[Edge, Fraction]

    def vertex(self, v: Vertex) -> Fraction:
        return self.vertex_weights.get(v, ZERO)

    def edge(self, v: Vertex, w: Vertex, s: int) -> Fraction:
        return self.edge_weights.get((v, w, s), ZERO)

    def is_trivial(self) -> bool:
        return not any(self.vertex_weights.values()) and not any(
            self.edge_weights.values()
        )

    def total(self) -> Fraction:
        return sum(self.vertex_weights.values(), ZERO)


@dataclass
class WeightReport:
    """check_weight outcome; violation lists are empty iff ok."""

    ok: bool
    balance_violations: list[tuple[Vertex, int]] = field(default_factory=list)
    symmetry_violations: list[Edge] = field(default_factory=list)
    negative_values: list[object] = field(default_factory=list)


def check_weight(weight: Weight) -> WeightReport:
    """Exact verification of both weight equation families."""
    graph = weight.graph
    gens = graph.generators
    report = WeightReport(ok=True)
    for v, val in weight.vertex_weights.items():
        if val < 0:
            report.negative_values.append(v)
    for e, val in weight.edge_weights.items():
        if val < 0:
            report.negative_values.append(e)
        if e not in graph.edges and val != 0:
            report.negative_values.append(e)  # weight off the edge set
    out_sums: dict[tuple[Vertex, int], Fraction] = {}
    in_sums: dict[tuple[Vertex, int], Fraction] = {}
    for (v, w, s), val in weight.edge_weights.items():
        out_sums[(v, s)] = out_sums.get((v, s), ZERO) + val
        in_sums[(w, s)] = in_sums.get((w, s), ZERO) + val
    for v in graph.vertices:
        for s in gens.letters:
            wv = weight.vertex(v)
            if out_sums.get((v, s), ZERO) != wv or in_sums.get((v, s), ZERO) != wv:
                report.balance_violations.append((v, s))
    seen: set[Edge] = set()
    for (v, w, s) in graph.edges:
        partner = (w, v, gens.inverse(s))
        if (v, w, s) in seen:
            continue
        seen.add(partner)
        if weight.edge(v, w, s) != weight.edge(*partner):
            report.symmetry_violations.append((v, w, s))
    report.ok = not (
        report.balance_violations or report.symmetry_violations or report.negative_values
    )
    return report


def _edge_variables(graph: ConstraintGraph) -> tuple[list[Edge], dict[Edge, int]]:
    """One variable per inverse-symmetric edge pair; the canonical
    representative is the smaller triple.  This bakes the symmetry equation
    into the variable set."""
    gens = graph.generators
    reps: list[Edge] = []
    index: dict[Edge, int] = {}
    for e in sorted(graph.edges, key=repr):
        v, w, s = e
        partner = (w, v, gens.inverse(s))
        rep = min(e, partner, key=repr)
        if rep not in index:
            index[rep] = len(reps)
            reps.append(rep)
        index[e] = index[rep]
    return reps, index


def weight_linear_system(
    graph: ConstraintGraph, positive_at: Vertex | None
) -> tuple[list[list[Fraction]], list[Fraction], list[Edge]]:
    """Flow-balance equations over the paired edge variables, plus the
    normalization row W(positive_at) = 1 (or total vertex weight 1)."""
    gens = graph.generators
    reps, index = _edge_variables(graph)
    nv = len(graph.vertices)
    vpos = {v: i for i, v in enumerate(graph.vertices)}
    ncols = nv + len(reps)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    one = Fraction(1)
    # Only positive letters: the constraint families for s and s^-1 coincide
    # once paired edges share a variable.
    for v in graph.vertices:
        for s in gens.positive:
            out_row = [ZERO] * ncols
            in_row = [ZERO] * ncols
            out_row[vpos[v]] = -one
            in_row[vpos[v]] = -one
            for (a, w, t) in graph.edges:
                if t != s:
                    continue
                if a == v:
                    out_row[nv + index[(a, w, t)]] += one
                if w == v:
                    in_row[nv + index[(a, w, t)]] += one
            rows.append(out_row)
            rhs.append(ZERO)
            rows.append(in_row)
            rhs.append(ZERO)
    norm = [ZERO] * ncols
    if positive_at is None:
        for v in graph.vertices:
            norm[vpos[v]] = one
    else:
        if positive_at not in vpos:
            raise ValueError(f"unknown vertex {positive_at!r}")
        norm[vpos[positive_at]] = one
    rows.append(norm)
    rhs.append(one)
    return rows, rhs, reps


def solve_weight_lp(
    graph: ConstraintGraph, positive_at: Vertex | None
) -> tuple[Weight | None, FarkasCertificate | None]:
    """Exact feasibility for a normalized weight; the certificate on the
    infeasible side is already verified against the system."""
    rows, rhs, reps = weight_linear_system(graph, positive_at)
    x, cert = solve_feasibility(rows, rhs)
    if x is None:
        return None, cert
    nv = len(graph.vertices)
    gens = graph.generators
    vertex_weights = {v: x[i] for i, v in enumerate(graph.vertices) if x[i] != 0}
    edge_weights: dict[Edge, Fraction] = {}
    for j, rep in enumerate(reps):
        val = x[nv + j]
        if val == 0:
            continue
        v, w, s = rep
        edge_weights[rep] = val
        edge_weights[(w, v, gens.inverse(s))] = val
    return Weight(graph, vertex_weights, edge_weights), None


def find_weight(graph: ConstraintGraph, positive_at: Vertex | None = None) -> Weight | None:
    """Nontrivial rational weight, with W(positive_at) = 1 when requested
    (total vertex weight 1 otherwise); None iff no such weight exists."""
    report = validate_graph(graph)
    if not report.ok:
        raise ValueError(f"invalid graph: {report}")
    weight, cert = solve_weight_lp(graph, positive_at)
    if weight is None:
        return None
    result = check_weight(weight)
    if not result.ok:
        raise AssertionError(f"solver produced a non-weight: {result}")
    return weight


def scale_to_integer(weight: Weight) -> tuple[Weight, int]:
    """Clear denominators: multiply by the lcm of all denominators.

    Returns the scaled weight and the factor used; support and value ratios
    are preserved, so the result is still a weight.
    """
    if not check_weight(weight).ok:
        raise ValueError("input is not a weight")
    denoms = [v.denominator for v in weight.vertex_weights.values()]
    denoms += [v.denominator for v in weight.edge_weights.values()]
    factor = 1
    for d in denoms:
        factor = factor * d // math.gcd(factor, d)
    scaled = Weight(
        weight.graph,
        {v: val * factor for v, val in weight.vertex_weights.items()},
        {e: val * factor for e, val in weight.edge_weights.items()},
    )
    return scaled, factor


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Cylinder frequencies of a shift-invariant measure: masses of the
    one-vertex cylinders and of the two-vertex edge cylinders."""

    vertex_freq: Mapping[Vertex, Fraction]
    edge_freq: Mapping[Edge, Fraction]

    def __post_init__(self):
        total = sum(self.vertex_freq.values(), ZERO)
        if total != 1:
            raise ValueError(f"vertex frequencies sum to {total}, not 1")
        if any(v < 0 for v in self.vertex_freq.values()) or any(
            v < 0 for v in self.edge_freq.values()
        ):
            raise ValueError("negative frequency")


def weight_from_measure(
    measure: EmpiricalMeasure, graph: ConstraintGraph
) -> tuple[Weight, WeightReport]:
    """Interpret cylinder frequencies as a weight and check it exactly.

    Frequencies of a genuinely shift-invariant measure always pass; the
    report pinpoints inconsistent data otherwise.
    """
    vset = set(graph.vertices)
    for v in measure.vertex_freq:
        if v not in vset:
            raise ValueError(f"measure supported off the graph: vertex {v!r}")
    for e in measure.edge_freq:
        if measure.edge_freq[e] != 0 and e not in graph.edges:
            raise ValueError(f"measure supported off the graph: edge {e!r}")
    weight = Weight(graph, dict(measure.vertex_freq), dict(measure.edge_freq))
    return weight, check_weight(weight)
