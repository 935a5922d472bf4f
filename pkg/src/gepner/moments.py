"""Exact moments from generating-polynomial data, polynomial fits in n, and limits."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .algebra import NewtonInterpolator, RatPoly, UniPoly, multinomial, stirling2

__all__ = [
    "Family",
    "MomentTable",
    "MomentError",
    "GuardFailure",
    "InsufficientPoints",
    "Divergent",
    "moments_from_coeffs",
    "moments_from_poly",
    "family_coeffs",
    "moment_degree",
    "fit_moment_polynomial",
    "FitResult",
    "limit_standardized",
]


class MomentError(ValueError):
    """Standardization or fitting is undefined for the given data."""


class InsufficientPoints(MomentError):
    pass


class GuardFailure(MomentError):
    """A guard point does not lie on the fitted polynomial."""

    def __init__(self, n, expected, got):
        super().__init__(f"degree assumption violated at n={n}: fit gives {got}, data is {expected}")
        self.n = n
        self.expected = expected
        self.got = got


class Family(enum.Enum):
    PERMS = "perms"
    WORDS = "words"


def _family(f) -> Family:
    return f if isinstance(f, Family) else Family(str(f).lower())


@dataclass
class MomentTable:
    """Raw, central and standardized moments of one distribution, orders 0..r."""

    N: int
    raw: list[Fraction]
    central: list[Fraction]
    family: Family | None = None
    n: int | None = None
    _std: dict[int, Fraction] = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.raw) - 1

    @property
    def mean(self) -> Fraction:
        return self.raw[1] if self.order >= 1 else Fraction(0)

    @property
    def variance(self) -> Fraction:
        return self.central[2]

    def standardized(self, r: int) -> Fraction:
        """``central[r] / central[2]^(r/2)`` for even r; raises on zero variance."""
        if r % 2:
            raise MomentError("standardized moments are reported for even orders only")
        if self.central[2] == 0:
            raise MomentError(f"zero variance at n={self.n}: standardization undefined")
        if r not in self._std:
            self._std[r] = self.central[r] / self.central[2] ** (r // 2)
        return self._std[r]


def moments_from_coeffs(c: Sequence[int], N: int | None = None, *, family=None, n=None) -> MomentTable:
    """Moments from ``c_j = sum_x C(x, j)`` (Taylor coefficients at q = 1).

    E[X^s] = (1/N) sum_j S(s, j) j! c_j; central moments by binomial expansion.
    """
    c = list(c)
    if N is None:
        N = c[0]
    if N <= 0 or c[0] != N:
        raise MomentError("c_0 must equal the population size N > 0")
    r = len(c) - 1
    raw = [
        Fraction(sum(stirling2(s, j) * factorial(j) * c[j] for j in range(s + 1)), N)
        for s in range(r + 1)
    ]
    mu = raw[1] if r >= 1 else Fraction(0)
    central = [
        sum(comb(s, k) * raw[k] * (-mu) ** (s - k) for k in range(s + 1)) for s in range(r + 1)
    ]
    central = [Fraction(x) for x in central]
    return MomentTable(N=N, raw=raw, central=central, family=_family(family) if family else None, n=n)


def moments_from_poly(g: UniPoly, r: int, **kw) -> MomentTable:
    if g.is_zero():
        raise MomentError("zero polynomial has no distribution")
    return moments_from_coeffs(g.taylor_at_one(r), g(1), **kw)


def moment_degree(family, r: int, kind: str = "central") -> int:
    """Degree of the moment polynomial in n: 2r for central moments, 3r for raw ones."""
    if kind == "central":
        return 2 * r
    if kind == "raw":
        return 3 * r
    raise ValueError(f"unknown moment kind {kind!r}")


@lru_cache(maxsize=8)
def _perm_polys(n_max: int, jobs: int):
    from .enumerate import gepner_poly_perm

    return {n: gepner_poly_perm(n, jobs=jobs, unsafe=True) for n in range(1, n_max + 1)}


_WORD_RUNS: dict[tuple[int, int], dict[int, list[int]]] = {}


def _word_coeffs(n_max: int, r: int, jobs: int):
    # any earlier sweep with n' >= n_max and r' >= r already holds the answer
    for (n0, r0), data in _WORD_RUNS.items():
        if n0 >= n_max and r0 >= r:
            return data
    from .recurrence import H_truncated

    data = H_truncated(n_max, r, jobs=jobs, unsafe=True)
    _WORD_RUNS[n_max, r] = data
    return data


def family_coeffs(family, n_values: Iterable[int], r: int, *, jobs: int = 1, unsafe: bool = False) -> dict[int, list[int]]:
    """Taylor coefficients c_0..c_r at q=1 for each requested n of a family."""
    fam = _family(family)
    ns = sorted(set(n_values))
    if not ns or ns[0] < 1:
        raise MomentError("sizes must be positive")
    if fam is Family.PERMS:
        from .enumerate import PERM_CAP, SizeLimitError

        if ns[-1] > PERM_CAP and not unsafe:
            raise SizeLimitError(f"n={ns[-1]} exceeds the permutation cap {PERM_CAP}")
        polys = _perm_polys(ns[-1], jobs)
        return {n: polys[n].taylor_at_one(r) for n in ns}
    from .recurrence import H_NMAX_CAP, H_ORDER_CAP

    if (ns[-1] > H_NMAX_CAP or r > H_ORDER_CAP) and not unsafe:
        from .enumerate import SizeLimitError

        raise SizeLimitError(f"truncated engine caps are n <= {H_NMAX_CAP}, r <= {H_ORDER_CAP}")
    data = _word_coeffs(ns[-1], max(r, 2), jobs)
    return {n: data[n][: r + 1] for n in ns}


def family_table(family, n: int, r: int, **kw) -> MomentTable:
    fam = _family(family)
    c = family_coeffs(fam, [n], r, **kw)[n]
    N = factorial(n) if fam is Family.PERMS else multinomial((n, n, n))
    return moments_from_coeffs(c, N, family=fam, n=n)


@dataclass
class FitResult:
    poly: RatPoly
    fit_ns: list[int]
    guard_ns: list[int]
    degree_bound: int


def fit_moment_polynomial(
    family,
    r: int,
    n_range: Iterable[int],
    *,
    guards: int = 2,
    kind: str = "central",
    degree: int | None = None,
    jobs: int = 1,
    unsafe: bool = False,
) -> FitResult:
    """Interpolate the order-r moment over n and check it on held-out guard points.

    The first ``degree + 1`` sizes of ``n_range`` are interpolated; every
    remaining size (at least ``guards`` of them) must lie on the result,
    otherwise :class:`GuardFailure` reports the first mismatch.  The degree is
    never raised to absorb a miss.
    """
    fam = _family(family)
    ns = sorted(set(n_range))
    d = moment_degree(fam, r, kind) if degree is None else degree
    if guards < 1:
        raise MomentError("at least one guard point is required")
    need = d + 1 + guards
    if len(ns) < need:
        raise InsufficientPoints(
            f"order {r} ({kind}) needs {d + 1} fit points plus {guards} guard"
            f"{'s' if guards != 1 else ''}; got {len(ns)} sizes"
        )
    coeffs = family_coeffs(fam, ns, r, jobs=jobs, unsafe=unsafe)
    values = {}
    for n in ns:
        N = factorial(n) if fam is Family.PERMS else multinomial((n, n, n))
        t = moments_from_coeffs(coeffs[n], N, family=fam, n=n)
        values[n] = t.central[r] if kind == "central" else t.raw[r]
    ni = NewtonInterpolator()
    for n in ns[: d + 1]:
        ni.add(n, values[n])
    for n in ns[d + 1:]:
        got = ni(n)
        if got != values[n]:
            raise GuardFailure(n, values[n], got)
    return FitResult(ni.poly(), ns[: d + 1], ns[d + 1:], d)


class Divergent:
    """Verdict for a standardized moment that grows without bound."""

    def __repr__(self):
        return "Divergent()"

    def __eq__(self, other):
        return isinstance(other, Divergent)

    def __hash__(self):
        return hash("divergent")


def limit_standardized(m_r: RatPoly, m_2: RatPoly, r: int) -> Fraction | Divergent:
    """lim m_r(n) / m_2(n)^(r/2) as n -> infinity."""
    if r % 2:
        return Fraction(0)
    if m_2.is_zero():
        raise MomentError("variance polynomial is identically zero")
    if m_r.is_zero():
        return Fraction(0)
    half = r // 2
    top = m_2.degree * half
    if m_r.degree < top:
        return Fraction(0)
    if m_r.degree > top:
        return Divergent()
    return m_r.leading / m_2.leading**half
