"""Perturbation decoding over quotient spaces.

The pipeline: partition a quotient of a metrized group into small cells,
record which cells the generator translations connect (a constraint
graph), attach to every edge a group element close to the generator image
that transports basepoints exactly, and read group elements off a
treequence by multiplying edge elements along letter paths.  A periodic
treequence then decodes to a map that is close to the original generator
assignment at every step and restricts to an honest homomorphism into the
lattice on a finite-index subgroup.

Oracles are duck-typed.  A group oracle provides ``identity``,
``mul(g, h)``, ``inv(g)``, a left-invariant ``dist(g, h)`` and
``random_near_identity(rng, radius)``.  A quotient oracle provides
``group``, ``cells()``, ``identity_cell``, ``cell_diameter``,
``basepoint(cell)``, ``locate(point)``, ``act(point, g)``,
``lift(point)``, ``in_lattice(g)`` and either ``exact_edges(phi)`` or
``sample_point(cell, rng)``.

Two exact instances are built in (circle rotation over Q(sqrt 2)) and the
symmetric group with a point stabilizer); the isometry group of the upper
half-plane is available as a floating group oracle for the continuity
search demo.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .freegroup import GeneratorSet, IDENTITY, Word, ball, inverse, standard_generators
from .quadfield import Quad, SQRT2
from .subshift import (
    ConstraintGraph,
    Edge,
    PeriodicTreequence,
    Pattern,
    Vertex,
    stabilizer_index,
    verify_periodic,
)

Element = object
PhiMap = dict[int, Element]


def phi_from_positive(group, gens: GeneratorSet, images: Sequence[Element]) -> PhiMap:
    """Extend images of the positive generators to all letters."""
    if len(images) != gens.rank:
        raise ValueError("one image per positive generator required")
    phi: PhiMap = {}
    for i, img in enumerate(images):
        phi[i] = img
        phi[gens.inverse(i)] = group.inv(img)
    return phi


# --- exact instance: circle rotation -------------------------------------


class RealLineGroup:
    """(R, +) with exact elements from Q(sqrt 2) and d(g, h) = |g - h|."""

    identity = Quad()

    @staticmethod
    def mul(g: Quad, h: Quad) -> Quad:
        return g + h

    @staticmethod
    def inv(g: Quad) -> Quad:
        return -g

    @staticmethod
    def dist(g: Quad, h: Quad) -> Quad:
        return abs(g - h)

    @staticmethod
    def random_near_identity(rng: random.Random, radius) -> Quad:
        scale = Fraction(rng.randint(-999, 999), 1000)
        return Quad(scale, 0) * Quad.of(radius)


class CircleQuotient:
    """R / Z cut into ``cells`` half-open arcs; the identity coset 0 sits in
    cell 0 whose basepoint it is.  All arithmetic is exact, so lattice
    membership (integrality) is decidable."""

    def __init__(self, cells: int):
        if cells < 1:
            raise ValueError("need at least one cell")
        self.n = cells
        self.group = RealLineGroup()
        self.identity_cell = 0
        self.cell_diameter = Fraction(1, cells)

    def cells(self) -> list[int]:
        return list(range(self.n))

    @staticmethod
    def canonical(t: Quad) -> Quad:
        return t - t.floor()

    def locate(self, t: Quad) -> int:
        return (Quad.of(self.n) * self.canonical(t)).floor()

    def basepoint(self, cell: int) -> Quad:
        return Quad(Fraction(cell, self.n), 0)

    def act(self, t: Quad, g: Quad) -> Quad:
        return self.canonical(t + g)

    def lift(self, t: Quad) -> Quad:
        t = self.canonical(t)
        return t - self.basepoint(self.locate(t))

    @staticmethod
    def in_lattice(g: Quad) -> bool:
        return g.is_integer()

    def exact_edges(self, phi: PhiMap, gens: GeneratorSet) -> list[tuple[int, int, int, Quad]]:
        """Edges by interval images: the shifted arc of each cell meets one
        or two arcs; witnesses are the overlap left endpoints."""
        out = []
        for i in range(self.n):
            left = self.basepoint(i)
            for s in gens.positive:
                start = self.canonical(left + phi[s])
                j = self.locate(start)
                out.append((i, j, s, left))
                boundary = Quad(Fraction(j + 1, self.n), 0)
                gap = boundary - start
                if gap < Quad(Fraction(1, self.n), 0):
                    # crosses into the next arc
                    out.append(((i), (j + 1) % self.n, s, left + gap))
        return out


def real_line_instance(cells: int = 20, tau: Quad = SQRT2):
    """Rank-1 instance: rotation by tau on R/Z."""
    gens = standard_generators(1)
    quotient = CircleQuotient(cells)
    phi = phi_from_positive(quotient.group, gens, [tau])
    return gens, quotient, phi


# --- exact instance: finite permutation group -----------------------------


class PermGroup:
    """Symmetric group on 0..degree-1; elements are image tuples, the
    metric is discrete."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = tuple(range(degree))

    @staticmethod
    def mul(g, h):
        # left action composition: (g h)(x) = g(h(x))
        return tuple(g[h[x]] for x in range(len(g)))

    @staticmethod
    def inv(g):
        out = [0] * len(g)
        for i, img in enumerate(g):
            out[img] = i
        return tuple(out)

    @staticmethod
    def dist(g, h) -> Fraction:
        return Fraction(0) if g == h else Fraction(1)

    def random_near_identity(self, rng: random.Random, radius):
        if Fraction(1) <= radius:
            perm = list(self.identity)
            rng.shuffle(perm)
            return tuple(perm)
        return self.identity


class CosetQuotient:
    """Right cosets of a point stabilizer in Sym(degree), identified with
    the permuted points; each coset is its own cell and basepoint."""

    def __init__(self, degree: int, stabilized: int = 0):
        self.group = PermGroup(degree)
        self.degree = degree
        self.stabilized = stabilized
        self.identity_cell = stabilized
        self.cell_diameter = Fraction(0)

    def cells(self) -> list[int]:
        return list(range(self.degree))

    def locate(self, point: int) -> int:
        return point

    def basepoint(self, cell: int) -> int:
        return cell

    @staticmethod
    def act(point: int, g) -> int:
        # coset of h maps to h^-1(stab point); right translation by g sends
        # it to g^-1 h^-1 (stab point)
        return PermGroup.inv(g)[point]

    def lift(self, point: int):
        return self.group.identity

    def in_lattice(self, g) -> bool:
        return g[self.stabilized] == self.stabilized

    def exact_edges(self, phi: PhiMap, gens: GeneratorSet):
        out = []
        for k in range(self.degree):
            for s in gens.positive:
                out.append((k, self.act(k, phi[s]), s, k))
        return out


def cycles_to_perm(degree: int, cycles: Sequence[Sequence[int]], one_indexed: bool = True):
    """Permutation from disjoint cycles, e.g. [(1,2,3,4)]."""
    img = list(range(degree))
    for cyc in cycles:
        pts = [c - 1 for c in cyc] if one_indexed else list(cyc)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def finite_perm_instance(degree: int = 4, images: Sequence | None = None, stabilized: int = 0):
    """Rank-2 instance into Sym(degree); defaults to a 4-cycle and a
    transposition with the stabilizer of the first point as lattice."""
    gens = standard_generators(2)
    quotient = CosetQuotient(degree, stabilized)
    if images is None:
        images = [
            cycles_to_perm(degree, [tuple(range(1, degree + 1))]),
            cycles_to_perm(degree, [(1, 2)]),
        ]
    phi = phi_from_positive(quotient.group, gens, list(images))
    return gens, quotient, phi


# --- floating instance: upper half-plane isometries ------------------------


class MoebiusGroup:
    """PSL(2, R) as unit-determinant matrices up to sign, with the
    left-invariant metric d(g, h) = dH(g.i, h.i) + dH(g.2i, h.2i)."""

    identity = (1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def normalize(m):
        a, b, c, d = m
        det = a * d - b * c
        if det <= 0:
            raise ValueError("matrix must have positive determinant")
        r = math.sqrt(det)
        a, b, c, d = a / r, b / r, c / r, d / r
        for lead in (a, b, c):
            if lead != 0:
                if lead < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        return (a, b, c, d)

    @classmethod
    def mul(cls, g, h):
        a, b, c, d = g
        e, f, i, j = h
        return cls.normalize((a * e + b * i, a * f + b * j, c * e + d * i, c * f + d * j))

    @classmethod
    def inv(cls, g):
        a, b, c, d = g
        return cls.normalize((d, -b, -c, a))

    @staticmethod
    def apply(g, z: complex) -> complex:
        a, b, c, d = g
        return (a * z + b) / (c * z + d)

    @classmethod
    def dist(cls, g, h) -> float:
        def dh(z1: complex, z2: complex) -> float:
            num = (z1.real - z2.real) ** 2 + (z1.imag - z2.imag) ** 2
            return math.acosh(1.0 + num / (2.0 * z1.imag * z2.imag))

        return dh(cls.apply(g, 1j), cls.apply(h, 1j)) + dh(
            cls.apply(g, 2j), cls.apply(h, 2j)
        )

    @classmethod
    def random_near_identity(cls, rng: random.Random, radius):
        radius = float(radius)
        for _ in range(1000):
            scale = radius * rng.uniform(0.05, 0.4)
            m = [1.0, 0.0, 0.0, 1.0]
            m = [m[k] + scale * rng.uniform(-1, 1) for k in range(4)]
            try:
                g = cls.normalize(tuple(m))
            except ValueError:
                continue
            if cls.dist(g, cls.identity) < radius:
                return g
        return cls.identity


# --- continuity search ------------------------------------------------------


def delta_for_epsilon(
    group,
    gens: GeneratorSet,
    phi: PhiMap,
    epsilon,
    rng: random.Random | None = None,
    samples: int = 2000,
) -> Fraction | float:
    """A radius delta such that d(g1 phi(s) g2, phi(s)) < epsilon whenever
    both g1, g2 lie in the delta-ball, found by bisection and validated by
    randomized sampling at radius delta."""
    rng = rng or random.Random(0)

    def violated(delta) -> bool:
        for _ in range(samples):
            g1 = group.random_near_identity(rng, delta)
            g2 = group.random_near_identity(rng, delta)
            for s in gens.letters:
                moved = group.mul(group.mul(g1, phi[s]), g2)
                if not group.dist(moved, phi[s]) < epsilon:
                    return True
        return False

    lo = None
    hi = epsilon if isinstance(epsilon, float) else Fraction(epsilon)
    for _ in range(40):
        if violated(hi):
            hi = hi / 2
        else:
            lo = hi
            break
    if lo is None:
        raise ArithmeticError("no usable delta found; epsilon may be too small")
    # grow back toward the first failing radius for a less conservative value
    probe = lo
    for _ in range(6):
        candidate = probe * 3 / 2
        if candidate >= epsilon or violated(candidate):
            break
        probe = candidate
    return probe


# --- edge isometries and decoding -------------------------------------------


@dataclass(frozen=True)
class EdgeIsometry:
    edge: Edge
    element: Element


@dataclass
class DiscoveredGraph:
    graph: ConstraintGraph
    witnesses: dict[Edge, Element]  # witness point per positive-letter edge


def build_constraint_graph(
    quotient,
    gens: GeneratorSet,
    phi: PhiMap,
    sample_budget: int = 0,
    rng: random.Random | None = None,
) -> DiscoveredGraph:
    """Cells become vertices; a directed edge (v, w; s) records that some
    point of v lands in w under phi(s).  Exact oracles enumerate edges from
    interval or coset arithmetic; otherwise cells are sampled, which can
    only miss edges (shrinking the subshift, never enlarging it)."""
    witnesses: dict[Edge, Element] = {}
    if hasattr(quotient, "exact_edges"):
        found = quotient.exact_edges(phi, gens)
    else:
        if sample_budget <= 0:
            raise ValueError("sampling oracle requires a positive sample budget")
        rng = rng or random.Random(0)
        found = []
        for cell in quotient.cells():
            for _ in range(sample_budget):
                p = quotient.sample_point(cell, rng)
                for s in gens.positive:
                    q = quotient.act(p, phi[s])
                    found.append((cell, quotient.locate(q), s, p))
    edges: set[Edge] = set()
    for (v, w, s, p) in found:
        if (v, w, s) not in witnesses:
            witnesses[(v, w, s)] = p
        edges.add((v, w, s))
        edges.add((w, v, gens.inverse(s)))
    graph = ConstraintGraph.build(gens, quotient.cells(), edges)
    return DiscoveredGraph(graph, witnesses)


def edge_isometries(
    discovered: DiscoveredGraph,
    quotient,
    phi: PhiMap,
    epsilon=None,
) -> dict[Edge, Element]:
    """psi_e = g_v phi(s) g_w^-1 per positive-letter edge, from basepoint
    lifts of the witness pair; inverse edges carry the inverse element, so
    decoding is independent of spellings.  With epsilon given, the bound
    d(psi_e, phi(s)) < epsilon is enforced."""
    gens = discovered.graph.generators
    group = quotient.group
    psi: dict[Edge, Element] = {}
    for (v, w, s), p in sorted(discovered.witnesses.items(), key=repr):
        q = quotient.act(p, phi[s])
        if quotient.locate(p) != v or quotient.locate(q) != w:
            raise ValueError(f"witness for edge {(v, w, s)!r} is not in its cells")
        g_v = quotient.lift(p)
        g_w = quotient.lift(q)
        element = group.mul(group.mul(g_v, phi[s]), group.inv(g_w))
        if epsilon is not None and not group.dist(element, phi[s]) < epsilon:
            raise ValueError(
                f"edge isometry for {(v, w, s)!r} strays {group.dist(element, phi[s])}"
                f" from the generator image; epsilon={epsilon}"
            )
        psi[(v, w, s)] = element
        psi[(w, v, gens.inverse(s))] = group.inv(element)
    return psi


def decode(
    x: PeriodicTreequence | Pattern,
    psi: Mapping[Edge, Element],
    group,
    letters: Iterable[int],
    start: int | None = None,
) -> Element:
    """Product of edge elements along the letter path of a word.

    ``letters`` may be any spelling, reduced or not; inverse-paired edge
    elements make the product depend only on the group element.  For a
    periodic treequence ``start`` overrides the carrier basepoint, which
    decodes the shifted treequence.
    """
    acc = group.identity
    if isinstance(x, PeriodicTreequence):
        k = x.basepoint if start is None else start
        for s in letters:
            k2 = x.step(k, s)
            e = (x.labeling[k], x.labeling[k2], s)
            if e not in psi:
                raise KeyError(f"no edge isometry along the path: {e!r}")
            acc = group.mul(acc, psi[e])
            k = k2
        return acc
    gens = x.graph.generators
    stack: list[int] = []
    for s in letters:
        prev = Word(tuple(stack))
        if stack and stack[-1] == gens.inverse(s):
            stack.pop()
        else:
            stack.append(s)
        here = Word(tuple(stack))
        if prev not in x.values or here not in x.values:
            raise KeyError(f"pattern does not cover the path at {here!r}")
        e = (x.values[prev], x.values[here], s)
        if e not in psi:
            raise KeyError(f"no edge isometry along the path: {e!r}")
        acc = group.mul(acc, psi[e])
    return acc


def make_decoder(
    x: PeriodicTreequence | Pattern, psi: Mapping[Edge, Element], group
) -> Callable[[Word], Element]:
    return lambda w: decode(x, psi, group, w.letters)


def check_epsilon_perturbation(
    phix: Callable[[Word], Element],
    phi: PhiMap,
    group,
    gens: GeneratorSet,
    epsilon,
    radius: int,
) -> bool:
    """The defining inequality d(phix(fs), phix(f) phi(s)) <= epsilon for
    every f in the radius ball and every letter s."""
    values = {w: phix(w) for w in ball(gens, radius + 1)}
    for f in ball(gens, radius):
        base = values[f]
        for s in gens.letters:
            fs = Word(f.letters[:-1]) if (f.letters and f.letters[-1] == gens.inverse(s)) else Word(f.letters + (s,))
            stepped = group.mul(base, phi[s])
            if not group.dist(values[fs], stepped) <= epsilon:
                return False
    return True


def check_cocycle(
    p: PeriodicTreequence,
    psi: Mapping[Edge, Element],
    group,
    trials: int = 200,
    max_length: int = 6,
    tolerance=Fraction(0),
    rng: random.Random | None = None,
) -> tuple[bool, float]:
    """phix(f) * phi_{shifted x}(g) = phix(fg) on random pairs; returns the
    verdict and the worst deviation seen."""
    rng = rng or random.Random(0)
    gens = p.graph.generators
    words = ball(gens, max_length)
    worst = 0.0
    ok = True
    for _ in range(trials):
        f = rng.choice(words)
        g = rng.choice(words)
        lhs_head = decode(p, psi, group, f.letters)
        shifted_start = p.walk(p.basepoint, f.letters)
        lhs_tail = decode(p, psi, group, g.letters, start=shifted_start)
        lhs = group.mul(lhs_head, lhs_tail)
        rhs = decode(p, psi, group, f.letters + g.letters)
        dev = group.dist(lhs, rhs)
        worst = max(worst, float(dev))
        if not dev <= tolerance:
            ok = False
    return ok, worst


@dataclass
class VirtualHomReport:
    """Outcome of the finite-index homomorphism verification."""

    index: int
    schreier_generators: list[Word]
    images: list[Element]
    homomorphism_ok: bool
    lattice_ok: bool
    basepoint_ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.homomorphism_ok and self.lattice_ok and self.basepoint_ok


def check_virtual_hom_into_lattice(
    p: PeriodicTreequence,
    psi: Mapping[Edge, Element],
    quotient,
    phi: PhiMap,
    test_radius: int = 4,
    tolerance=Fraction(0),
) -> VirtualHomReport:
    """Verify that decoding restricts to a homomorphism into the lattice on
    the basepoint stabilizer:

    (i)   phix(f g) = phix(f) phix(g) for Schreier generators f of the
          stabilizer and all test words g,
    (ii)  phix(f) lies in the lattice for every Schreier generator,
    (iii) the identity coset transported by phix(f) is the basepoint of the
          cell x(f), for all test words f.
    """
    if not verify_periodic(p):
        raise ValueError("not a valid periodic treequence")
    if p.labeling[p.basepoint] != quotient.identity_cell:
        raise ValueError("treequence must sit over the identity cell")
    group = quotient.group
    gens = p.graph.generators
    index, schreier = stabilizer_index(p)
    images = [decode(p, psi, group, f.letters) for f in schreier]
    report = VirtualHomReport(index, schreier, images, True, True, True)
    test_words = ball(gens, test_radius)
    for f, image in zip(schreier, images):
        for g in test_words:
            combined = decode(p, psi, group, f.letters + g.letters)
            split = group.mul(image, decode(p, psi, group, g.letters))
            if not group.dist(combined, split) <= tolerance:
                report.homomorphism_ok = False
                report.failures.append(f"not multiplicative at f={f}, g={g}")
    for f, image in zip(schreier, images):
        if not quotient.in_lattice(image):
            report.lattice_ok = False
            report.failures.append(f"image of {f} is outside the lattice")
    identity_coset = quotient.basepoint(quotient.identity_cell)
    for f in test_words:
        transported = quotient.act(identity_coset, decode(p, psi, group, f.letters))
        expected = quotient.basepoint(p.value(f))
        if transported != expected:
            report.basepoint_ok = False
            report.failures.append(f"basepoint mismatch at {f}")
    return report


# --- the full uniform pipeline ----------------------------------------------


@dataclass
class PipelineResult:
    graph: ConstraintGraph
    treequence: PeriodicTreequence
    psi: dict[Edge, Element]
    report: VirtualHomReport
    carrier_size: int

    @property
    def ok(self) -> bool:
        return self.report.ok


def run_uniform_pipeline(
    quotient, gens: GeneratorSet, phi: PhiMap, epsilon=None, test_radius: int = 4
) -> PipelineResult:
    """Constraint graph -> weight -> integer scaling -> synthesis -> edge
    isometries -> virtual-homomorphism verification, end to end."""
    from .synthesis import synthesize
    from .weights import find_weight, scale_to_integer

    discovered = build_constraint_graph(quotient, gens, phi)
    v1 = quotient.identity_cell
    weight = find_weight(discovered.graph, positive_at=v1)
    if weight is None:
        raise ValueError("no weight with positive mass at the identity cell")
    integral, _ = scale_to_integer(weight)
    p = synthesize(discovered.graph, integral, v1)
    psi = edge_isometries(discovered, quotient, phi, epsilon=epsilon)
    report = check_virtual_hom_into_lattice(p, psi, quotient, phi, test_radius)
    return PipelineResult(discovered.graph, p, psi, report, p.size)
