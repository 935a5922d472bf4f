"""Vectorized residue backend for the truncated (p, x, y, z) recurrence.

Each series is a dense int64 vector over the degree-<=r simplex of exponent
tuples, one column per prime.  The substitution v -> p + v + p v is a fixed
sparse integer matrix; multiplication by (1+v)^a is a sum of index shifts
weighted by C(a, j) mod each prime.  The box is swept by anti-diagonals
a1+a2+a3 = s, so only two planes are resident and every cell of a plane is
independent of the others.  Diagonal results are lifted back to integers by
CRT; the primes are chosen so their product exceeds a proven upper bound on
every returned coefficient.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from math import comb, prod
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .algebra import multinomial

log = logging.getLogger(__name__)

PRIME_BITS = 29
CHUNK = 96
CHECKPOINT_VERSION = 1
CHECKPOINT_EVERY = 8

# (source offset axis, substituted var, multiplied var, cell axis giving the exponent)
# F(a) = t21^a2 s32[F(a-e1)] + t32^a3 s13[F(a-e2)] + t13^a1 s21[F(a-e3)]
DIRECTIONS = ((0, 1, 3, 1), (1, 2, 1, 2), (2, 3, 2, 0))


def primes_below(limit: int, count: int) -> list[int]:
    from sympy import prevprime

    out = []
    p = limit
    while len(out) < count:
        p = prevprime(p)
        out.append(p)
    return out


class Simplex:
    """Index of the exponent tuples (e_p, e_x, e_y, e_z) of total degree <= r."""

    def __init__(self, r: int):
        self.r = r
        self.monos = [
            (a, b, c, d)
            for a in range(r + 1)
            for b in range(r + 1 - a)
            for c in range(r + 1 - a - b)
            for d in range(r + 1 - a - b - c)
        ]
        self.index = {m: i for i, m in enumerate(self.monos)}
        self.size = len(self.monos)
        self.diag = np.array([self.index[(j, 0, 0, 0)] for j in range(r + 1)])
        self.sub = {v: self._substitution(v) for v in (1, 2, 3)}
        self.shifts = {v: [self._shift(v, j) for j in range(r + 1)] for v in (1, 2, 3)}

    def _substitution(self, v: int) -> sp.csr_matrix:
        rows, cols, vals = [], [], []
        r = self.r
        for src, k in enumerate(self.monos):
            base = sum(k)
            kv = k[v]
            for j in range(kv + 1):
                for l in range(min(j, r - base) + 1):
                    kk = list(k)
                    kk[v] = j
                    kk[0] = k[0] + kv - j + l
                    rows.append(self.index[tuple(kk)])
                    cols.append(src)
                    vals.append(comb(kv, j) * comb(j, l))
        m = sp.coo_matrix((vals, (rows, cols)), shape=(self.size, self.size), dtype=np.int64)
        return m.tocsr()

    def _shift(self, v: int, j: int) -> tuple[np.ndarray, np.ndarray]:
        src, dst = [], []
        for i, k in enumerate(self.monos):
            if sum(k) + j <= self.r:
                kk = list(k)
                kk[v] += j
                src.append(i)
                dst.append(self.index[tuple(kk)])
        return np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp)

    def max_row_sum(self) -> int:
        return max(int(abs(m).sum(axis=1).max()) for m in self.sub.values())


@lru_cache(maxsize=4)
def simplex(r: int) -> Simplex:
    return Simplex(r)


def coefficient_bound(n_max: int, r: int) -> int:
    """Every returned c_j = sum_w C(gep(w), j) is at most N * C(n^3, j)."""
    return max(multinomial((n, n, n)) * comb(n**3, j) for n in range(1, n_max + 1) for j in range(r + 1))


def choose_primes(n_max: int, r: int) -> list[int]:
    bound = coefficient_bound(n_max, r)
    count = 1
    while True:
        ps = primes_below(2**PRIME_BITS, count)
        if prod(ps) > bound:
            return ps
        count += 1


def _plane(s: int, n: int) -> list[tuple[int, int, int]]:
    return [
        (a1, a2, s - a1 - a2)
        for a1 in range(max(0, s - 2 * n), min(n, s) + 1)
        for a2 in range(max(0, s - a1 - n), min(n, s - a1) + 1)
    ]


class _Sweep:
    def __init__(self, n_max: int, r: int, primes: list[int]):
        self.n = n_max
        self.r = r
        self.primes = np.array(primes, dtype=np.int64)
        self.S = simplex(r)
        if self.S.max_row_sum() * (2**PRIME_BITS) >= 2**63 or (r + 2) * 2 ** (2 * PRIME_BITS) >= 2**63:
            raise OverflowError("prime size too large for int64 accumulation")
        # binom[a, j, k] = C(a, j) mod p_k
        table = [[comb(a, j) for j in range(r + 1)] for a in range(n_max + 1)]
        self.binom = np.array(
            [[[c % int(p) for p in primes] for c in row] for row in table], dtype=np.int64
        )

    def _binmul(self, G: np.ndarray, var: int, exps: np.ndarray) -> np.ndarray:
        P = self.primes
        acc = G.copy()
        top = min(self.r, int(exps.max()) if len(exps) else 0)
        for j in range(1, top + 1):
            src, dst = self.S.shifts[var][j]
            coef = self.binom[exps, j, :]  # (c, K)
            acc[dst] += G[src] * coef[None, :, :]
            if j % 8 == 0:
                acc %= P
        acc %= P
        return acc

    def advance(self, prev: np.ndarray, prev_cells, cells) -> np.ndarray:
        M, K = self.S.size, len(self.primes)
        P = self.primes
        out = np.zeros((M, len(cells), K), dtype=np.int64)
        where = {c: i for i, c in enumerate(prev_cells)}
        cells_arr = np.array(cells, dtype=np.intp).reshape(len(cells), 3)
        for axis, sub_var, mul_var, exp_axis in DIRECTIONS:
            tgt = np.nonzero(cells_arr[:, axis] >= 1)[0]
            if not len(tgt):
                continue
            e = [0, 0, 0]
            e[axis] = 1
            pred = np.array(
                [where[(c[0] - e[0], c[1] - e[1], c[2] - e[2])] for c in cells_arr[tgt]],
                dtype=np.intp,
            )
            for lo in range(0, len(tgt), CHUNK):
                t = tgt[lo:lo + CHUNK]
                G = prev[:, pred[lo:lo + CHUNK], :]
                c = len(t)
                G = (self.S.sub[sub_var] @ G.reshape(M, c * K)).reshape(M, c, K) % P
                out[:, t, :] += self._binmul(G, mul_var, cells_arr[t, exp_axis])
        out %= P
        return out

    def run(self, checkpoint: Path | None = None) -> dict[int, np.ndarray]:
        M, K = self.S.size, len(self.primes)
        diag: dict[int, np.ndarray] = {}
        start = 0
        plane = np.zeros((M, 1, K), dtype=np.int64)
        plane[self.S.index[(0, 0, 0, 0)], 0, :] = 1
        cells = [(0, 0, 0)]
        if checkpoint is not None and checkpoint.exists():
            loaded = _load_checkpoint(checkpoint, self)
            if loaded is not None:
                start, plane, diag = loaded
                cells = _plane(start, self.n)
                log.info("resumed truncated sweep at plane %d", start)
        for s in range(start + 1, 3 * self.n + 1):
            new_cells = _plane(s, self.n)
            plane = self.advance(plane, cells, new_cells)
            cells = new_cells
            if s % 3 == 0:
                m = s // 3
                i = cells.index((m, m, m))
                diag[m] = plane[self.S.diag, i, :].copy()
            if checkpoint is not None and s % CHECKPOINT_EVERY == 0 and s < 3 * self.n:
                _save_checkpoint(checkpoint, self, s, plane, diag)
        return diag


def _header(sw: _Sweep) -> dict:
    return {
        "format": "gepner-truncated-sweep",
        "version": CHECKPOINT_VERSION,
        "n_max": sw.n,
        "r": sw.r,
        "primes": [int(p) for p in sw.primes],
    }


def _save_checkpoint(path: Path, sw: _Sweep, s: int, plane, diag) -> None:
    head = dict(_header(sw), plane=s)
    tmp = path.with_suffix(".tmp.npz")
    arrays = {f"diag_{m}": v for m, v in diag.items()}
    np.savez(tmp, header=np.array(json.dumps(head, sort_keys=True)), plane=plane, **arrays)
    os.replace(tmp, path)


def _load_checkpoint(path: Path, sw: _Sweep):
    with np.load(path) as data:
        head = json.loads(str(data["header"]))
        expect = _header(sw)
        if any(head.get(k) != v for k, v in expect.items()):
            log.warning("ignoring checkpoint %s: header mismatch", path)
            return None
        diag = {int(k[5:]): data[k] for k in data.files if k.startswith("diag_")}
        return head["plane"], data["plane"], diag


def _checkpoint_path(directory, n_max, r, primes) -> Path:
    tag = hashlib.sha1(",".join(map(str, primes)).encode()).hexdigest()[:10]
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    return d / f"trunc_n{n_max}_r{r}_{tag}.npz"


def _run_group(args):
    n_max, r, primes, checkpoint_dir = args
    ck = _checkpoint_path(checkpoint_dir, n_max, r, primes) if checkpoint_dir else None
    return _Sweep(n_max, r, primes).run(ck)


def crt(residues, primes) -> int:
    M = prod(primes)
    x = 0
    for a, p in zip(residues, primes):
        Mi = M // p
        x += int(a) * Mi * pow(Mi, -1, p)
    return x % M


def run_modular(n_max: int, r: int, *, jobs: int = 1, checkpoint_dir=None) -> dict[int, list[int]]:
    primes = choose_primes(n_max, r)
    jobs = max(1, min(jobs, len(primes)))
    groups = [primes[i::jobs] for i in range(jobs)]
    tasks = [(n_max, r, g, checkpoint_dir) for g in groups]
    if jobs == 1:
        results = [_run_group(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_group, tasks))
    order = [p for g in groups for p in g]
    out = {}
    for n in range(1, n_max + 1):
        res = np.concatenate([part[n] for part in results], axis=1)  # (r+1, K)
        coeffs = [crt(res[j], order) for j in range(r + 1)]
        if coeffs[0] != multinomial((n, n, n)):
            raise ArithmeticError(f"residue sweep inconsistent at n={n}")
        out[n] = coeffs
    return out
