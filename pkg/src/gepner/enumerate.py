"""Brute-force generating polynomials: the oracles of record.

Permutations are enumerated in shards keyed by their first two entries; each
shard is scored in one vectorized pass.  Words over {1,2,3} are walked by a
multiset DFS that carries the incremental gep / pair-count state, so each
node costs O(1).
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from math import comb, factorial

import numpy as np

from .algebra import CatalyticPoly, UniPoly
from .stats import Composition, DomainError, gep, inv, maj

__all__ = [
    "StatKind",
    "SizeLimitError",
    "PERM_CAP",
    "WORD_CAP",
    "JOINT_CAP",
    "gepner_poly_perm",
    "gepner_poly_perm_naive",
    "stat_poly_perm",
    "stat_poly_words",
    "joint_catalytic_poly",
    "multiset_words",
]

PERM_CAP = 10
WORD_CAP = 15
JOINT_CAP = 12


class SizeLimitError(ValueError):
    """Requested enumeration exceeds the configured size cap."""


class StatKind(enum.Enum):
    GEP = "gep"
    INV = "inv"
    MAJ = "maj"

    @property
    def func(self):
        return {StatKind.GEP: gep, StatKind.INV: inv, StatKind.MAJ: maj}[self]


def _as_kind(s) -> StatKind:
    return s if isinstance(s, StatKind) else StatKind(str(s).lower())


def _run_shards(fn, shards, jobs: int):
    if jobs <= 1 or len(shards) <= 1:
        return [fn(s) for s in shards]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, shards))


# ---------------------------------------------------------------- permutations


def _perm_gep_batch(perms: np.ndarray) -> np.ndarray:
    """gep of each row of a permutation array.

    For distinct values a triple is odd iff the product of its three pairwise
    comparison signs is -1, so gep = (C(n,3) - sum of sign products) / 2.
    """
    rows, n = perms.shape
    sign = {}
    for i in range(n):
        for j in range(i + 1, n):
            sign[i, j] = np.sign(perms[:, j] - perms[:, i]).astype(np.int8)
    total = np.zeros(rows, dtype=np.int32)
    for i in range(n):
        for j in range(i + 1, n):
            inner = np.zeros(rows, dtype=np.int16)
            for k in range(j + 1, n):
                inner += sign[i, k] * sign[j, k]
            total += sign[i, j] * inner
    return (comb(n, 3) - total) // 2


def _perm_shard(args) -> np.ndarray:
    n, prefix = args
    rest = np.array([v for v in range(n) if v not in prefix], dtype=np.int8)
    tails = np.array(list(itertools.permutations(range(n - len(prefix)))), dtype=np.int8)
    tails = tails.reshape(len(tails), n - len(prefix))
    perms = np.empty((len(tails), n), dtype=np.int8)
    perms[:, : len(prefix)] = prefix
    perms[:, len(prefix):] = rest[tails]
    return np.bincount(_perm_gep_batch(perms), minlength=comb(n, 3) + 1)


def _check_perm_n(n: int, unsafe: bool) -> None:
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > PERM_CAP and not unsafe:
        raise SizeLimitError(
            f"n={n} exceeds the permutation cap {PERM_CAP} (cost grows as n!); "
            "pass unsafe=True to override"
        )


def gepner_poly_perm(n: int, *, jobs: int = 1, unsafe: bool = False) -> UniPoly:
    """``G_n(q)``: the gep distribution over all n! permutations."""
    _check_perm_n(n, unsafe)
    if n < 3:
        return UniPoly(factorial(n))
    shards = [(n, p) for p in itertools.permutations(range(n), 2)]
    counts = sum(_run_shards(_perm_shard, shards, jobs))
    return UniPoly({e: int(c) for e, c in enumerate(counts)})


def gepner_poly_perm_naive(n: int) -> UniPoly:
    """Per-permutation O(n^3) recomputation; cross-check for small n."""
    c = Counter(gep(p) for p in itertools.permutations(range(1, n + 1)))
    return UniPoly(dict(c))


def stat_poly_perm(n: int, s, *, unsafe: bool = False) -> UniPoly:
    kind = _as_kind(s)
    if kind is StatKind.GEP:
        return gepner_poly_perm(n, unsafe=unsafe)
    _check_perm_n(n, unsafe)
    c = Counter(kind.func(p) for p in itertools.permutations(range(1, n + 1)))
    return UniPoly(dict(c))


# ----------------------------------------------------------------------- words


def multiset_words(a: Sequence[int]):
    """All words with ``a[i]`` copies of letter ``i+1``, in lexicographic order."""
    a = list(a)
    k = len(a)
    buf: list[int] = []
    total = sum(a)

    def rec():
        if len(buf) == total:
            yield tuple(buf)
            return
        for i in range(k):
            if a[i]:
                a[i] -= 1
                buf.append(i + 1)
                yield from rec()
                buf.pop()
                a[i] += 1

    yield from rec()


def _check_comp(a, cap: int, unsafe: bool) -> tuple[int, int, int]:
    comp = Composition(tuple(int(x) for x in a))
    if len(comp.counts) != 3:
        raise DomainError("word enumeration is over the alphabet {1,2,3}")
    if comp.total > cap and not unsafe:
        raise SizeLimitError(
            f"total {comp.total} exceeds the word enumeration cap {cap}; "
            "pass unsafe=True to override"
        )
    return comp.counts


def _walk_gep(rem, prefix_state, acc, joint: bool):
    """DFS over the remaining multiset, tallying leaves into ``acc``.

    State is (gep, c32, c13, c21, n1, n2, n3) of the current prefix; the
    updates are exactly the append rules of :func:`stats.append_deltas`.
    """
    r1, r2, r3 = rem

    def rec(r1, r2, r3, g, c32, c13, c21, n1, n2, n3):
        if not (r1 or r2 or r3):
            if joint:
                key = (g, c32, c13, c21)
                acc[key] = acc.get(key, 0) + 1
            else:
                acc[g] += 1
            return
        if r1:
            rec(r1 - 1, r2, r3, g + c32, c32, c13, c21 + n2, n1 + 1, n2, n3)
        if r2:
            rec(r1, r2 - 1, r3, g + c13, c32 + n3, c13, c21, n1, n2 + 1, n3)
        if r3:
            rec(r1, r2, r3 - 1, g + c21, c32, c13 + n1, c21, n1, n2, n3 + 1)

    rec(r1, r2, r3, *prefix_state)


def _prefix_state(prefix):
    g = c32 = c13 = c21 = 0
    n = [0, 0, 0, 0]
    for x in prefix:
        if x == 1:
            g += c32
            c21 += n[2]
        elif x == 2:
            g += c13
            c32 += n[3]
        else:
            g += c21
            c13 += n[1]
        n[x] += 1
    return (g, c32, c13, c21, n[1], n[2], n[3])


def _word_shard(args):
    a, prefix, kind, joint = args
    rem = list(a)
    for x in prefix:
        rem[x - 1] -= 1
    if kind is StatKind.GEP:
        if joint:
            acc = {}
        else:
            acc = [0] * (a[0] * a[1] * a[2] + 1)
        _walk_gep(rem, _prefix_state(prefix), acc, joint)
        return acc
    fn = kind.func
    c = Counter(fn(prefix + w) for w in multiset_words(rem))
    return dict(c)


def _word_shards(a, kind, joint):
    total = sum(a)
    depth = min(2, total)
    prefixes = set()
    for p in itertools.product((1, 2, 3), repeat=depth):
        if all(p.count(i + 1) <= a[i] for i in range(3)):
            prefixes.add(p)
    return [(tuple(a), p, kind, joint) for p in sorted(prefixes)]


def stat_poly_words(a: Sequence[int], s="gep", *, jobs: int = 1, unsafe: bool = False) -> UniPoly:
    """Distribution polynomial of a statistic over W(a1, a2, a3)."""
    kind = _as_kind(s)
    a = _check_comp(a, WORD_CAP, unsafe)
    parts = _run_shards(_word_shard, _word_shards(a, kind, False), jobs)
    out: dict[int, int] = {}
    for part in parts:
        items = enumerate(part) if isinstance(part, list) else part.items()
        for e, v in items:
            if v:
                out[e] = out.get(e, 0) + v
    return UniPoly(out)


def joint_catalytic_poly(a: Sequence[int], *, jobs: int = 1, unsafe: bool = False) -> CatalyticPoly:
    """sum over W(a) of q^gep t32^#32 t13^#13 t21^#21, by enumeration."""
    a = _check_comp(a, JOINT_CAP, unsafe)
    out: dict[tuple[int, ...], int] = {}
    for part in _run_shards(_word_shard, _word_shards(a, StatKind.GEP, True), jobs):
        for k, v in part.items():
            out[k] = out.get(k, 0) + v
    return CatalyticPoly(out)
