"""Finite-support weights on large graphs via truncation and pattern sums.

For a finite vertex set A, a weight W on a (possibly very large) graph
splits into its truncation W' (supported on A and A-A edges) plus pattern
contributions W_z, one per equivalence class of finite patterns whose
non-A core is S-connected and surrounded by A values.  Matching the
boundary-flow vector of W over A x S by a nonnegative combination of the
pattern vectors turns the infinite sum back into a finite one; the
assembled W' + sum t_z W_z is then a genuine finitely supported weight
and feeds directly into integer scaling and synthesis.

Pattern collections are supplied explicitly: at desk scale we never
enumerate patterns from a measure, we validate and combine given ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .freegroup import Word, is_s_connected, outer_boundary
from .rationallp import FarkasCertificate, solve_cone_membership
from .subshift import ConstraintGraph, Edge, Pattern, Vertex, check_pattern
from .weights import Weight, WeightReport, check_weight

ZERO = Fraction(0)


@dataclass(frozen=True)
class TruncationSpec:
    """A finite window A inside the vertex set of a graph."""

    graph: ConstraintGraph
    window: frozenset[Vertex]

    def __post_init__(self):
        if not self.window:
            raise ValueError("window must be nonempty")
        if not self.window <= set(self.graph.vertices):
            raise ValueError("window must consist of graph vertices")

    def outside(self, v: Vertex) -> bool:
        return v not in self.window


@dataclass(frozen=True)
class SparseWeightFn:
    """Weight-shaped function with finite support; not necessarily a weight."""

    vertex_values: Mapping[Vertex, Fraction]
    edge_values: Mapping[Edge, Fraction]

    def vertex(self, v: Vertex) -> Fraction:
        return self.vertex_values.get(v, ZERO)

    def edge(self, e: Edge) -> Fraction:
        return self.edge_values.get(e, ZERO)

    def scaled(self, t: Fraction) -> "SparseWeightFn":
        return SparseWeightFn(
            {v: t * val for v, val in self.vertex_values.items()},
            {e: t * val for e, val in self.edge_values.items()},
        )

    def plus(self, other: "SparseWeightFn") -> "SparseWeightFn":
        vv = dict(self.vertex_values)
        for v, val in other.vertex_values.items():
            vv[v] = vv.get(v, ZERO) + val
        ee = dict(self.edge_values)
        for e, val in other.edge_values.items():
            ee[e] = ee.get(e, ZERO) + val
        return SparseWeightFn(vv, ee)


def truncate_weight(weight: Weight, spec: TruncationSpec) -> SparseWeightFn:
    """Keep values on the window and window-window edges, zero the rest.

    The result is generally not a weight; no check is run.
    """
    vv = {
        v: val
        for v, val in weight.vertex_weights.items()
        if v in spec.window and val != 0
    }
    ee = {
        (v, w, s): val
        for (v, w, s), val in weight.edge_weights.items()
        if v in spec.window and w in spec.window and val != 0
    }
    return SparseWeightFn(vv, ee)


@dataclass(frozen=True)
class PatternWeight:
    """A pattern with an S-connected non-window core plus its weight-shaped
    contribution.

    Invariants (validate): the core z^-1(V - A) is S-connected, the domain
    is core + outer boundary, the window part vanishes (vertex values and
    window-window edges), and window-to-core edge values mirror their
    inverse edges.
    """

    pattern_id: str
    pattern: Pattern
    values: SparseWeightFn

    def validate(self, spec: TruncationSpec) -> list[str]:
        problems: list[str] = []
        gens = self.pattern.graph.generators
        core = [w for w, v in self.pattern.values.items() if spec.outside(v)]
        if not core:
            problems.append("pattern core is empty")
            return problems
        if not is_s_connected(gens, core):
            problems.append("pattern core is not S-connected")
        expected = set(core) | set(outer_boundary(gens, core))
        if set(self.pattern.values) != expected:
            problems.append("pattern domain is not core + outer boundary")
        if not check_pattern(self.pattern):
            problems.append("pattern violates the constraint graph")
        for a, val in self.values.vertex_values.items():
            if not spec.outside(a) and val != 0:
                problems.append(f"nonzero value on window vertex {a!r}")
        for (v, w, s), val in self.values.edge_values.items():
            if val == 0:
                continue
            if not spec.outside(v) and not spec.outside(w):
                problems.append(f"nonzero value on window-window edge {(v, w, s)!r}")
        for (v, w, s), val in self.values.edge_values.items():
            if not spec.outside(v) and spec.outside(w):
                mirror = self.values.edge((w, v, gens.inverse(s)))
                if val != mirror:
                    problems.append(
                        f"window-core edge {(v, w, s)!r} not mirroring its inverse"
                    )
        return problems


@dataclass(frozen=True)
class ConeVector:
    """Nonnegative vector over (window vertex, letter) coordinates."""

    coordinates: Mapping[tuple[Vertex, int], Fraction]

    def coordinate(self, a: Vertex, s: int) -> Fraction:
        return self.coordinates.get((a, s), ZERO)

    def as_list(self, keys: Sequence[tuple[Vertex, int]]) -> list[Fraction]:
        return [self.coordinates.get(k, ZERO) for k in keys]

    def is_zero(self) -> bool:
        return not any(self.coordinates.values())


def vector_of(values: SparseWeightFn, spec: TruncationSpec) -> ConeVector:
    """Boundary flow: coordinate (a, s) sums the values of s-labeled edges
    from window vertex a into the outside."""
    coords: dict[tuple[Vertex, int], Fraction] = {}
    for (v, w, s), val in values.edge_values.items():
        if val == 0:
            continue
        if v in spec.window and spec.outside(w):
            key = (v, s)
            coords[key] = coords.get(key, ZERO) + val
    return ConeVector(coords)


def vector_of_weight(weight: Weight, spec: TruncationSpec) -> ConeVector:
    return vector_of(
        SparseWeightFn(dict(weight.vertex_weights), dict(weight.edge_weights)), spec
    )


class ConeDecompositionError(ValueError):
    def __init__(self, message: str, certificate: FarkasCertificate | None):
        super().__init__(message)
        self.certificate = certificate


def finite_cone_decomposition(
    target: ConeVector, generators: Sequence[ConeVector]
) -> list[tuple[int, Fraction]]:
    """Smallest prefix of the generator list whose positive cone contains
    the target, with exact coefficients; prefix length grows one by one, so
    the prefix used is minimal.  Any solution found at the minimal prefix
    length N involves generator N-1 (otherwise N-1 would already have been
    feasible), so N is recoverable as max index + 1 (0 for a zero target).

    Raises ConeDecompositionError with the final Farkas certificate when
    even the full list fails.
    """
    if not generators and not target.is_zero():
        raise ConeDecompositionError("no generators supplied", None)
    keys = sorted(
        {k for g in generators for k in g.coordinates} | set(target.coordinates),
        key=repr,
    )
    target_vec = target.as_list(keys)
    last_cert: FarkasCertificate | None = None
    start = 0 if target.is_zero() else 1
    for n in range(start, len(generators) + 1):
        coeffs, cert = solve_cone_membership(
            target_vec, [g.as_list(keys) for g in generators[:n]]
        )
        if coeffs is not None:
            return [(i, c) for i, c in enumerate(coeffs) if c != 0]
        last_cert = cert
    raise ConeDecompositionError(
        "target is outside the positive cone of the supplied generators",
        last_cert,
    )


class AssemblyError(ValueError):
    def __init__(self, message: str, report: WeightReport):
        super().__init__(message)
        self.report = report


def assemble_finite_weight(
    truncated: SparseWeightFn,
    terms: Sequence[tuple[PatternWeight, Fraction]],
    graph: ConstraintGraph,
) -> Weight:
    """W' + sum t_z W_z restricted to its finite support, checked exactly.

    A failed check signals inconsistent inputs, e.g. coefficients that do
    not come from a decomposition of the correct boundary vector.
    """
    for _, t in terms:
        if t < 0:
            raise ValueError("coefficients must be nonnegative")
    acc = truncated
    for pw, t in terms:
        if t == 0:
            continue
        acc = acc.plus(pw.values.scaled(t))
    weight = Weight(
        graph,
        {v: val for v, val in acc.vertex_values.items() if val != 0},
        {e: val for e, val in acc.edge_values.items() if val != 0},
    )
    report = check_weight(weight)
    if not report.ok:
        raise AssemblyError("assembled function is not a weight", report)
    return weight
