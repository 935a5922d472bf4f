"""Word statistics: gep, inv, maj, and the pair-count state behind the recurrence."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "Word",
    "Composition",
    "PairCounts",
    "WordState",
    "as_word",
    "gep",
    "gep_fast",
    "inv",
    "maj",
    "pair_counts",
    "append_deltas",
    "replay",
]


class DomainError(ValueError):
    """Input outside the domain of a statistic (bad letter, bad composition)."""


Word = tuple[int, ...]


def as_word(letters: Iterable[int]) -> Word:
    w = tuple(int(x) for x in letters)
    if any(x < 1 for x in w):
        raise DomainError(f"letters must be positive integers, got {w}")
    return w


@dataclass(frozen=True)
class Composition:
    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts:
            raise DomainError("composition needs at least one part")
        if any(c < 0 for c in self.counts):
            raise DomainError(f"negative multiplicity in {self.counts}")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def of(cls, w: Sequence[int], k: int = 3) -> Composition:
        return cls(tuple(sum(1 for x in w if x == i) for i in range(1, k + 1)))


@dataclass(frozen=True)
class PairCounts:
    c32: int = 0
    c13: int = 0
    c21: int = 0


def gep(w: Sequence[int]) -> int:
    """Number of triples i<j<k reducing to 132, 213 or 321 (strict comparisons).

    This is the plain O(m^3) triple loop; :func:`gep_fast` is the O(m^2) variant.
    """
    m = len(w)
    total = 0
    for i in range(m):
        a = w[i]
        for j in range(i + 1, m):
            b = w[j]
            for k in range(j + 1, m):
                c = w[k]
                if a < c < b or b < a < c or c < b < a:
                    total += 1
    return total


def gep_fast(w: Sequence[int]) -> int:
    # middle letter b at j: 132 needs a<c<b, 213 needs b<a<c, 321 needs c<b<a
    m = len(w)
    total = 0
    for j in range(1, m - 1):
        b = w[j]
        left = w[:j]
        right = w[j + 1:]
        for a in left:
            if a < b:
                total += sum(1 for c in right if a < c < b)
            elif a > b:
                total += sum(1 for c in right if c > a) + sum(1 for c in right if c < b)
    return total


def inv(w: Sequence[int]) -> int:
    m = len(w)
    return sum(1 for i in range(m) for j in range(i + 1, m) if w[i] > w[j])


def maj(w: Sequence[int]) -> int:
    return sum(i + 1 for i in range(len(w) - 1) if w[i] > w[i + 1])


def _check_three(w: Sequence[int]) -> None:
    for x in w:
        if x not in (1, 2, 3):
            raise DomainError(f"letter {x!r} outside {{1,2,3}}")


def pair_counts(w: Sequence[int]) -> PairCounts:
    """Counts of position pairs i<j whose letters read 32, 13 and 21."""
    _check_three(w)
    seen = [0, 0, 0, 0]
    c32 = c13 = c21 = 0
    for x in w:
        if x == 2:
            c32 += seen[3]
        elif x == 3:
            c13 += seen[1]
        else:
            c21 += seen[2]
        seen[x] += 1
    return PairCounts(c32, c13, c21)


@dataclass(frozen=True)
class WordState:
    """gep, pair counts and letter multiplicities of a prefix over {1,2,3}."""

    gep: int = 0
    pairs: PairCounts = PairCounts()
    counts: tuple[int, int, int] = (0, 0, 0)


def append_deltas(state: WordState, letter: int) -> WordState:
    """State of ``w'c`` from the state of ``w'``.

    Appending 1 completes every 32 pair; appending 2 every 13 pair;
    appending 3 every 21 pair.
    """
    p = state.pairs
    n1, n2, n3 = state.counts
    if letter == 1:
        return WordState(state.gep + p.c32, PairCounts(p.c32, p.c13, p.c21 + n2), (n1 + 1, n2, n3))
    if letter == 2:
        return WordState(state.gep + p.c13, PairCounts(p.c32 + n3, p.c13, p.c21), (n1, n2 + 1, n3))
    if letter == 3:
        return WordState(state.gep + p.c21, PairCounts(p.c32, p.c13 + n1, p.c21), (n1, n2, n3 + 1))
    raise DomainError(f"letter {letter!r} outside {{1,2,3}}")


def replay(w: Sequence[int]) -> WordState:
    s = WordState()
    for x in w:
        s = append_deltas(s, x)
    return s
