"""Schottky groups on the upper half-plane boundary.

A rank-r Schottky group is certified by 2r pairwise disjoint disks on the
boundary circle, one per letter, such that each generator maps the
exterior of its own disk into the interior of its inverse's disk.  That
ping-pong configuration proves the group free and confines every orbit
and the whole limit set inside the disks, which is what the orbit
enumeration and the limit-set sampler exploit.

Groups are built either from explicit circle pairs (each generator is the
composition of inversions in its two circles) or from matrices directly,
taking isometric circles as the ping-pong disks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..freegroup import GeneratorSet, Word, ball, standard_generators
from .plane import Moebius


@dataclass(frozen=True)
class BoundaryDisk:
    """Closed disk on the boundary R + {inf}: the interval
    [center - radius, center + radius], or its complement (through inf)
    when inverted."""

    center: float
    radius: float
    inverted: bool = False

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains(self, x: float) -> bool:
        if math.isinf(x):
            return self.inverted
        inside = abs(x - self.center) <= self.radius
        return not inside if self.inverted else inside

    def disjoint_from(self, other: "BoundaryDisk") -> bool:
        gap = abs(self.center - other.center)
        if not self.inverted and not other.inverted:
            return gap > self.radius + other.radius
        if self.inverted and other.inverted:
            return False  # both contain inf
        inner, outer = (other, self) if self.inverted else (self, other)
        # inner must sit strictly inside the disk that outer complements
        return gap + inner.radius < outer.radius

    def interval(self) -> tuple[float, float]:
        if self.inverted:
            raise ValueError("inverted disk is not a bounded interval")
        return self.center - self.radius, self.center + self.radius


def circle_inversion_pair(c1: float, r1: float, c2: float, r2: float) -> Moebius:
    """Composition of the inversions in two boundary circles; maps the
    exterior of the first into the interior of the second (or, for nested
    circles, into the complement of the second)."""
    m2 = (c2, r2 * r2 - c2 * c2, 1.0, -c2)
    m1 = (c1, r1 * r1 - c1 * c1, 1.0, -c1)
    a = m2[0] * m1[0] + m2[1] * m1[2]
    b = m2[0] * m1[1] + m2[1] * m1[3]
    c = m2[2] * m1[0] + m2[3] * m1[2]
    d = m2[2] * m1[1] + m2[3] * m1[3]
    return Moebius.of(a, b, c, d)


class NotSchottkyError(ValueError):
    pass


@dataclass(frozen=True)
class SchottkyGroup:
    """Free group of Moebius transformations with ping-pong disks.

    ``disks[letter]`` is the target disk of that letter: the letter maps
    the exterior of ``disks[inverse]`` into the interior of
    ``disks[letter]``, so images and fixed points of reduced words starting
    with a letter lie in that letter's disk.
    """

    generators: GeneratorSet
    elements: tuple[Moebius, ...]  # one per letter, positive first
    disks: tuple[BoundaryDisk, ...]

    @property
    def rank(self) -> int:
        return self.generators.rank

    def element(self, letter: int) -> Moebius:
        return self.elements[letter]

    def evaluate(self, word: Word) -> Moebius:
        out = Moebius.identity()
        for letter in word.letters:
            out = out.compose(self.elements[letter])
        return out

    def has_finite_disks(self) -> bool:
        return all(not d.inverted for d in self.disks)


def _validate_pingpong(disks: Sequence[BoundaryDisk]) -> None:
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if not disks[i].disjoint_from(disks[j]):
                raise NotSchottkyError(
                    f"ping-pong disks {i} and {j} are not disjoint: "
                    f"{disks[i]} vs {disks[j]}"
                )


def schottky_from_circles(
    circle_pairs: Iterable[tuple[tuple[float, float], tuple[float, float]]],
) -> SchottkyGroup:
    """One generator per pair ((c1, r1), (c2, r2)) of boundary circles,
    realized as the composition of the two inversions.

    Disjoint circles give a generator pairing disk(c1, r1) with
    disk(c2, r2); nested circles (first inside second) give a generator
    whose outgoing disk is the complement of the second circle, as in
    z -> 4z from |z| = 1 and |z| = 2.
    """
    pairs = list(circle_pairs)
    if not pairs:
        raise NotSchottkyError("need at least one circle pair")
    gens = standard_generators(len(pairs))
    elements: list[Moebius | None] = [None] * (2 * len(pairs))
    disks: list[BoundaryDisk | None] = [None] * (2 * len(pairs))
    for i, ((c1, r1), (c2, r2)) in enumerate(pairs):
        gap = abs(c1 - c2)
        if gap > r1 + r2:
            d_in = BoundaryDisk(c1, r1)
            d_out = BoundaryDisk(c2, r2)
        elif gap + r1 < r2:
            d_in = BoundaryDisk(c1, r1)
            d_out = BoundaryDisk(c2, r2, inverted=True)
        else:
            raise NotSchottkyError(
                f"circles ({c1}, {r1}) and ({c2}, {r2}) overlap or touch"
            )
        g = circle_inversion_pair(c1, r1, c2, r2)
        elements[i] = g
        elements[gens.inverse(i)] = g.inverse()
        disks[i] = d_out
        disks[gens.inverse(i)] = d_in
    _validate_pingpong([d for d in disks if d is not None])
    return SchottkyGroup(gens, tuple(elements), tuple(disks))


def isometric_disk(g: Moebius) -> BoundaryDisk:
    """Isometric circle of g: |cz + d| = 1; g maps its exterior onto the
    interior of the isometric circle of g^-1."""
    if g.c == 0:
        raise NotSchottkyError("generator fixing infinity has no isometric circle")
    return BoundaryDisk(-g.d / g.c, 1.0 / abs(g.c))


def schottky_from_matrices(mats: Sequence[Moebius]) -> SchottkyGroup:
    """Certify a generator list via isometric circles; raises
    NotSchottkyError when the 2r circles are not pairwise disjoint."""
    gens = standard_generators(len(mats))
    elements: list[Moebius | None] = [None] * (2 * len(mats))
    disks: list[BoundaryDisk | None] = [None] * (2 * len(mats))
    for i, g in enumerate(mats):
        ginv = g.inverse()
        elements[i] = g
        elements[gens.inverse(i)] = ginv
        disks[i] = isometric_disk(ginv)  # image disk of the letter
        disks[gens.inverse(i)] = isometric_disk(g)
    _validate_pingpong([d for d in disks if d is not None])
    return SchottkyGroup(gens, tuple(elements), tuple(disks))


def limit_set_sample(group: SchottkyGroup, depth: int) -> list[float]:
    """Attracting fixed points of all nonempty reduced words of length at
    most ``depth``; one point per word, all inside the ping-pong disks."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out = []
    for w in ball(group.generators, depth):
        if not w:
            continue
        out.append(group.evaluate(w).attracting_fixed_point())
    return sorted(out, key=lambda x: (math.isinf(x), x))


def level_cover(group: SchottkyGroup, level: int) -> dict[tuple[int, ...], tuple[float, float]]:
    """Nested interval cover of the limit set: for every reduced word w of
    the given length, the interval w(disk of the next admissible letters)
    ... here realized as w' applied to the last letter's disk, keyed by the
    word.  Requires finite disks."""
    if not group.has_finite_disks():
        raise ValueError("interval covers need finite ping-pong disks")
    cover: dict[tuple[int, ...], tuple[float, float]] = {}
    for w in ball(group.generators, level):
        if len(w) != level:
            continue
        prefix = Word(w.letters[:-1])
        last = w.letters[-1]
        lo, hi = group.disks[last].interval()
        m = group.evaluate(prefix)
        a, b = m.apply_boundary(lo), m.apply_boundary(hi)
        cover[w.letters] = (min(a, b), max(a, b))
    return cover
