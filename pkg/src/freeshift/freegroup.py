"""Reduced words over a symmetric free generating set.

Letters are small integers: ``0 .. r-1`` are the positive generators and
``i + r`` is the inverse of ``i`` (indices mod ``2r``), so inverting a letter
is constant time.  Textual symbols ("a", "b^-1", ...) appear only at the I/O
boundary.  All values are immutable and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True)
class GeneratorSet:
    """Symmetric free generating set of rank ``r``.

    ``names`` lists the positive generators; the full symbol list is
    ``names + [n + "^-1" for n in names]``.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("rank must be positive")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        for n in self.names:
            if not n or n.endswith("^-1") or " " in n:
                raise ValueError(f"bad generator name {n!r}")

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def letters(self) -> range:
        """All 2r letters, positive generators first."""
        return range(2 * self.rank)

    @property
    def positive(self) -> range:
        return range(self.rank)

    def inverse(self, letter: int) -> int:
        return (letter + self.rank) % (2 * self.rank)

    def symbol(self, letter: int) -> str:
        r = self.rank
        return self.names[letter] if letter < r else self.names[letter - r] + "^-1"

    def letter(self, symbol: str) -> int:
        base, neg = (symbol[:-3], True) if symbol.endswith("^-1") else (symbol, False)
        try:
            i = self.names.index(base)
        except ValueError:
            raise ValueError(f"unknown letter {symbol!r}") from None
        return i + self.rank if neg else i


def standard_generators(rank: int) -> GeneratorSet:
    """Generators named a, b, c, ... for small ranks, else s1, s2, ..."""
    if rank <= 6:
        return GeneratorSet(tuple("abcdef"[:rank]))
    return GeneratorSet(tuple(f"s{i + 1}" for i in range(rank)))


@dataclass(frozen=True, order=True)
class Word:
    """A reduced word.  Ordering is by (length, letters) so that sorted word
    sets iterate deterministically, shortest first."""

    letters: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)


IDENTITY = Word()


def reduce(gens: GeneratorSet, letters: Iterable[int]) -> Word:
    """Free reduction of a raw letter sequence; idempotent."""
    stack: list[int] = []
    n = 2 * gens.rank
    for ltr in letters:
        if not 0 <= ltr < n:
            raise ValueError(f"letter {ltr} outside generator set of rank {gens.rank}")
        if stack and stack[-1] == gens.inverse(ltr):
            stack.pop()
        else:
            stack.append(ltr)
    return Word(tuple(stack))


def concat(gens: GeneratorSet, u: Word, v: Word) -> Word:
    """Group multiplication: concatenate then reduce."""
    return reduce(gens, u.letters + v.letters)


def inverse(gens: GeneratorSet, w: Word) -> Word:
    return Word(tuple(gens.inverse(ltr) for ltr in reversed(w.letters)))


def ball(gens: GeneratorSet, radius: int) -> list[Word]:
    """All reduced words of length <= radius, sorted.

    For rank r >= 2 the count is 1 + 2r((2r-1)^radius - 1)/(2r-2).
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    words = [IDENTITY]
    frontier = [IDENTITY]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            forbidden = gens.inverse(w.letters[-1]) if w.letters else None
            for ltr in gens.letters:
                if ltr != forbidden:
                    nxt.append(Word(w.letters + (ltr,)))
        words.extend(nxt)
        frontier = nxt
    return sorted(words)


def sphere(gens: GeneratorSet, radius: int) -> list[Word]:
    """Reduced words of length exactly radius, sorted."""
    return [w for w in ball(gens, radius) if len(w) == radius]


def neighbors(gens: GeneratorSet, w: Word) -> list[Word]:
    """Cayley-graph neighbors {w s : s in S}; always 2r words."""
    out = []
    for ltr in gens.letters:
        if w.letters and w.letters[-1] == gens.inverse(ltr):
            out.append(Word(w.letters[:-1]))
        else:
            out.append(Word(w.letters + (ltr,)))
    return out


def s_connected_components(gens: GeneratorSet, words: Iterable[Word]) -> list[list[Word]]:
    """Partition into maximal S-connected subsets (f adjacent to fs, s in S).

    Components come back sorted, ordered by their smallest element.
    """
    pool = set(words)
    components: list[list[Word]] = []
    remaining = sorted(pool)
    seen: set[Word] = set()
    for start in remaining:
        if start in seen:
            continue
        comp = {start}
        queue = [start]
        while queue:
            w = queue.pop()
            for nb in neighbors(gens, w):
                if nb in pool and nb not in comp:
                    comp.add(nb)
                    queue.append(nb)
        seen |= comp
        components.append(sorted(comp))
    components.sort(key=lambda c: c[0])
    return components


def is_s_connected(gens: GeneratorSet, words: Iterable[Word]) -> bool:
    pool = set(words)
    if not pool:
        return True
    return len(s_connected_components(gens, pool)) == 1


def outer_boundary(gens: GeneratorSet, words: Iterable[Word]) -> list[Word]:
    """All f not in C with fs in C for some s in S; disjoint from C, sorted."""
    pool = set(words)
    out: set[Word] = set()
    for w in pool:
        for nb in neighbors(gens, w):
            if nb not in pool:
                out.add(nb)
    return sorted(out)


# --- textual serialization ("a b^-1 a") ---------------------------------


def format_word(gens: GeneratorSet, w: Word) -> str:
    return " ".join(gens.symbol(ltr) for ltr in w.letters)


def parse_word(gens: GeneratorSet, text: str) -> Word:
    """Parse a whitespace-separated symbol string and reduce it."""
    parts = text.split()
    return reduce(gens, (gens.letter(p) for p in parts))
