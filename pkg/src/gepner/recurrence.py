"""Dynamic-programming engines over the composition box.

* :func:`inv_poly_recurrence` -- the inversion recurrence over W(a1, a2, a3).
* :func:`F_catalytic` -- the exact functional recurrence in (q, t32, t13, t21).
* :func:`gepner_poly_words_fast` -- its specialization at t = 1.
* :func:`H_truncated` -- the same recurrence after q = 1+p, t = 1+x/y/z,
  truncated to total degree r, restricted to x = y = z = 0 on the diagonal.

The box is swept in layers of constant a1 with only two layers resident.
States with a negative index are zero; the only base state is (0, 0, 0) = 1.
"""

from __future__ import annotations

import os
from math import comb

from .algebra import AlgebraError, CatalyticPoly, TruncSeries, UniPoly, multinomial
from .stats import DomainError

__all__ = [
    "sweep_box",
    "inv_poly_recurrence",
    "F_catalytic",
    "gepner_poly_words_fast",
    "H_truncated",
    "H_truncated_exact",
    "FAST_CAP",
    "H_NMAX_CAP",
    "H_ORDER_CAP",
]

FAST_CAP = 18
H_NMAX_CAP = 30
H_ORDER_CAP = 14


def _box(a):
    a = tuple(int(x) for x in a)
    if len(a) != 3 or min(a) < 0:
        raise DomainError(f"box index must be three nonnegative integers, got {a}")
    return a


def sweep_box(dims, base, step, want=None):
    """Evaluate a three-way recurrence over ``[0..dims[0]] x [0..dims[1]] x [0..dims[2]]``.

    ``step(a, f1, f2, f3)`` builds the value at ``a`` from the values at
    ``a - e1``, ``a - e2``, ``a - e3`` (``None`` when an index is negative).
    ``want(a)`` selects which states to return; defaults to the far corner.
    """
    d1, d2, d3 = dims
    if want is None:
        want = lambda a: a == (d1, d2, d3)  # noqa: E731
    out = {}
    prev = None
    for a1 in range(d1 + 1):
        cur = {}
        for a2 in range(d2 + 1):
            for a3 in range(d3 + 1):
                a = (a1, a2, a3)
                if a == (0, 0, 0):
                    v = base
                else:
                    v = step(
                        a,
                        prev[a2, a3] if a1 else None,
                        cur[a2 - 1, a3] if a2 else None,
                        cur[a2, a3 - 1] if a3 else None,
                    )
                cur[a2, a3] = v
                if want(a):
                    out[a] = v
        prev = cur
    return out


def inv_poly_recurrence(a1: int, a2: int, a3: int) -> UniPoly:
    """f(a) = q^(a2+a3) f(a-e1) + q^a3 f(a-e2) + f(a-e3)."""
    a = _box((a1, a2, a3))

    def step(a, f1, f2, f3):
        _, b2, b3 = a
        out = UniPoly()
        if f1 is not None:
            out = out + f1 * UniPoly.monomial(b2 + b3)
        if f2 is not None:
            out = out + f2 * UniPoly.monomial(b3)
        if f3 is not None:
            out = out + f3
        return out

    return sweep_box(a, UniPoly(1), step)[a]


def F_catalytic(a1: int, a2: int, a3: int) -> CatalyticPoly:
    """Exact polynomial sum_w q^gep t32^#32 t13^#13 t21^#21 over W(a1, a2, a3)."""
    a = _box((a1, a2, a3))

    def step(a, f1, f2, f3):
        b1, b2, b3 = a
        out = CatalyticPoly()
        if f1 is not None:
            out = out + f1.q_shift(1).times_monomial((0, 0, 0, b2))
        if f2 is not None:
            out = out + f2.q_shift(2).times_monomial((0, b3, 0, 0))
        if f3 is not None:
            out = out + f3.q_shift(3).times_monomial((0, 0, b1, 0))
        return out

    return sweep_box(a, CatalyticPoly.one(), step)[a]


def _dense_step(a, f1, f2, f3):
    """Recurrence step on dense arrays indexed [e_q, e32, e13, e21].

    Array bounds per state: e_q <= a1 a2 a3, e32 <= a2 a3, e13 <= a1 a3, e21 <= a1 a2.
    """
    import numpy as np

    b1, b2, b3 = a
    shape = (b1 * b2 * b3 + 1, b2 * b3 + 1, b1 * b3 + 1, b1 * b2 + 1)
    out = np.zeros(shape, dtype=object if _needs_object(a) else np.int64)

    def add_shifted(src, axis, mono_axis, shift):
        # t_axis -> q*t_axis (e_q += e_axis), then multiply by t_mono^shift
        for k in range(src.shape[axis]):
            pick = [slice(None)] * 4
            pick[axis] = k
            block = src[tuple(pick)]
            dst = [slice(k, k + src.shape[0])] + [slice(0, n) for n in src.shape[1:]]
            dst[mono_axis] = slice(shift, shift + src.shape[mono_axis])
            dst[axis] = k
            out[tuple(dst)] += block

    if f1 is not None:
        add_shifted(f1, 1, 3, b2)
    if f2 is not None:
        add_shifted(f2, 2, 1, b3)
    if f3 is not None:
        add_shifted(f3, 3, 2, b1)
    return out


def _needs_object(a) -> bool:
    return multinomial(a) >= 2**62


def gepner_poly_words_fast(a1: int, a2: int, a3: int, *, unsafe: bool = False) -> UniPoly:
    """The gep distribution over W(a1, a2, a3) via the catalytic recurrence.

    Runs on dense exponent arrays; the catalytic variables are set to 1
    only after the sweep, so the output equals ``F_catalytic(a).specialize()``.
    """
    import numpy as np

    a = _box((a1, a2, a3))
    if sum(a) > FAST_CAP and not unsafe:
        from .enumerate import SizeLimitError

        raise SizeLimitError(f"total {sum(a)} exceeds the exact recurrence cap {FAST_CAP}")
    base = np.ones((1, 1, 1, 1), dtype=np.int64)
    arr = sweep_box(a, base, _dense_step)[a]
    q = arr.sum(axis=(1, 2, 3))
    return UniPoly({e: int(v) for e, v in enumerate(q)})


# ------------------------------------------------------------ truncated engine


def _check_h(n_max: int, r: int, unsafe: bool) -> None:
    if r < 2:
        raise AlgebraError("truncation order must be at least 2 (the variance needs p^2)")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if not unsafe and (n_max > H_NMAX_CAP or r > H_ORDER_CAP):
        from .enumerate import SizeLimitError

        raise SizeLimitError(
            f"truncated engine caps are n_max <= {H_NMAX_CAP}, r <= {H_ORDER_CAP}"
        )


def H_truncated_exact(n_max: int, r: int, *, unsafe: bool = False) -> dict[int, list[int]]:
    """Truncated engine on :class:`TruncSeries` with Python integers.

    Returns ``{n: [c_0, ..., c_r]}`` for 1 <= n <= n_max, where ``c_j`` is the
    coefficient of p^j in g_n(1 + p).
    """
    _check_h(n_max, r, unsafe)

    def step(a, f1, f2, f3):
        b1, b2, b3 = a
        out = TruncSeries(r)
        if f1 is not None:
            out = out + f1.substitute("x").mul_binomial("z", b2)
        if f2 is not None:
            out = out + f2.substitute("y").mul_binomial("x", b3)
        if f3 is not None:
            out = out + f3.substitute("z").mul_binomial("y", b1)
        return out

    diag = sweep_box(
        (n_max,) * 3,
        TruncSeries.one(r),
        step,
        want=lambda a: a[0] == a[1] == a[2] and a[0] >= 1,
    )
    return {a[0]: s.restrict_p() for a, s in sorted(diag.items())}


def H_truncated(
    n_max: int,
    r: int,
    *,
    engine: str = "modular",
    jobs: int = 1,
    checkpoint_dir: str | os.PathLike | None = None,
    unsafe: bool = False,
) -> dict[int, list[int]]:
    """Coefficients of p^0..p^r in g_n(1 + p) for 1 <= n <= n_max.

    ``engine="exact"`` runs on Python-integer :class:`TruncSeries`;
    ``engine="modular"`` runs the identical recurrence on vectorized residues
    modulo several primes and lifts by CRT against a rigorous size bound.
    ``checkpoint_dir`` (or ``$GEPNER_CHECKPOINT_DIR``) enables resumable runs
    for the modular engine.
    """
    if engine == "exact":
        return H_truncated_exact(n_max, r, unsafe=unsafe)
    if engine != "modular":
        raise ValueError(f"unknown engine {engine!r}")
    _check_h(n_max, r, unsafe)
    from ._modular import run_modular

    if checkpoint_dir is None:
        checkpoint_dir = os.environ.get("GEPNER_CHECKPOINT_DIR") or None
    return run_modular(n_max, r, jobs=jobs, checkpoint_dir=checkpoint_dir)


def diagonal_bound(n: int, j: int) -> int:
    """Upper bound on sum_w C(gep(w), j) over W(n, n, n); gep never exceeds n^3."""
    return multinomial((n, n, n)) * comb(n**3, j)
