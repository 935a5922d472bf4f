"""Exact arithmetic substrate: sparse polynomials, truncated series, q-factorials,
Stirling/Bernoulli numbers and rational interpolation.

Every container here is a sparse exponent -> coefficient map with zero
coefficients never stored.  Integers are Python ints and rationals are
:class:`fractions.Fraction`, so nothing is ever rounded.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd, prod

__all__ = [
    "AlgebraError",
    "UniPoly",
    "CatalyticPoly",
    "TruncSeries",
    "RatPoly",
    "qbracket",
    "qfactorial",
    "gaussian_multinomial",
    "multinomial",
    "stirling2",
    "bernoulli",
    "interpolate",
    "NewtonInterpolator",
]


class AlgebraError(ValueError):
    """Raised for domain errors in the exact-arithmetic layer."""


def _clean(terms):
    return {k: v for k, v in terms.items() if v}


class UniPoly:
    """Univariate polynomial in ``q`` with integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | Sequence[int] | int | None = None):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, int):
            c = {0: coeffs}
        elif isinstance(coeffs, Mapping):
            c = dict(coeffs)
        else:
            c = {e: v for e, v in enumerate(coeffs)}
        for e in c:
            if e < 0:
                raise AlgebraError(f"negative exponent {e}")
        self._c = _clean(c)

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> UniPoly:
        return cls({e: c})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    @property
    def degree(self) -> int | None:
        """Largest exponent, or ``None`` for the zero polynomial."""
        return max(self._c) if self._c else None

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def dense(self) -> list[int]:
        """Coefficient list ``[c_0, ..., c_deg]`` (empty for zero)."""
        if not self._c:
            return []
        return [self._c.get(e, 0) for e in range(self.degree + 1)]

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other):
        if isinstance(other, int):
            other = UniPoly(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = UniPoly(other)
        out = dict(self._c)
        for e, v in other._c.items():
            out[e] = out.get(e, 0) + v
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, UniPoly) else UniPoly(-other))

    def __mul__(self, other):
        if isinstance(other, int):
            return UniPoly({e: v * other for e, v in self._c.items()})
        out: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly(1)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, divisor: UniPoly) -> tuple[UniPoly, UniPoly]:
        """Polynomial long division; the divisor must have leading coefficient +-1."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        d = divisor.degree
        lead = divisor._c[d]
        rem = dict(self._c)
        quo: dict[int, int] = {}
        while rem:
            top = max(rem)
            if top < d:
                break
            c, r = divmod(rem[top], lead)
            if r:
                raise AlgebraError("division leaves a non-integral quotient")
            quo[top - d] = c
            for e, v in divisor._c.items():
                k = top - d + e
                rem[k] = rem.get(k, 0) - c * v
                if not rem[k]:
                    del rem[k]
        return UniPoly(quo), UniPoly(rem)

    def exact_div(self, divisor: UniPoly) -> UniPoly:
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise AlgebraError("inexact polynomial division")
        return q

    def __call__(self, x):
        return sum(v * x**e for e, v in self._c.items())

    def shift(self, x: int = 1) -> list[int]:
        """Coefficients of ``g(x + p)`` as a polynomial in ``p``, low degree first."""
        out = [0] * ((self.degree or 0) + 1)
        for e, v in self._c.items():
            for j in range(e + 1):
                out[j] += v * comb(e, j) * x ** (e - j)
        return out

    def taylor_at_one(self, order: int) -> list[int]:
        """``[c_0, ..., c_order]`` where ``c_j = sum_e coeff(e) * C(e, j)``."""
        return [sum(v * comb(e, j) for e, v in self._c.items()) for j in range(order + 1)]

    def is_palindromic(self, top: int | None = None) -> bool:
        if not self._c:
            return True
        top = self.degree if top is None else top
        return all(self._c.get(top - e, 0) == v for e, v in self._c.items())

    def to_text(self, var: str = "q") -> str:
        """Descending ``c*q^e`` terms joined by `` + ``; negative terms use `` - ``."""
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            mag = abs(v)
            if e == 0:
                body = str(mag)
            elif e == 1:
                body = f"{mag}*{var}"
            else:
                body = f"{mag}*{var}^{e}"
            if not parts:
                parts.append(body if v > 0 else f"-{body}")
            else:
                parts.append(("+ " if v > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"UniPoly({self.to_text()!r})"


class CatalyticPoly:
    """Polynomial in ``(q, t32, t13, t21)`` keyed by 4-tuples of exponents."""

    __slots__ = ("_t",)
    nvars = 4

    def __init__(self, terms: Mapping[tuple[int, ...], int] | None = None):
        t = _clean(dict(terms or {}))
        for k in t:
            if len(k) != self.nvars or min(k) < 0:
                raise AlgebraError(f"bad exponent tuple {k}")
        self._t = t

    @classmethod
    def one(cls) -> CatalyticPoly:
        return cls({(0,) * cls.nvars: 1})

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._t)

    def __len__(self):
        return len(self._t)

    def __eq__(self, other):
        if not isinstance(other, CatalyticPoly):
            return NotImplemented
        return self._t == other._t

    def __add__(self, other):
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, 0) + v
        return CatalyticPoly(out)

    def __mul__(self, other):
        out: dict[tuple[int, ...], int] = {}
        for k1, v1 in self._t.items():
            for k2, v2 in other._t.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return CatalyticPoly(out)

    def times_monomial(self, exps: Sequence[int]) -> CatalyticPoly:
        return CatalyticPoly(
            {tuple(a + b for a, b in zip(k, exps)): v for k, v in self._t.items()}
        )

    def q_shift(self, var: int) -> CatalyticPoly:
        """Substitute ``t -> q*t`` for the catalytic variable at position ``var`` (1..3)."""
        if var not in (1, 2, 3):
            raise AlgebraError("catalytic variable index must be 1, 2 or 3")
        out = {}
        for k, v in self._t.items():
            kk = list(k)
            kk[0] += k[var]
            out[tuple(kk)] = v
        return CatalyticPoly(out)

    def specialize(self) -> UniPoly:
        """Set every catalytic variable to 1."""
        out: dict[int, int] = {}
        for k, v in self._t.items():
            out[k[0]] = out.get(k[0], 0) + v
        return UniPoly(out)

    def truncate(self, order: int) -> TruncSeries:
        return TruncSeries(order, {k: v for k, v in self._t.items() if sum(k) <= order})

    def __repr__(self):
        return f"CatalyticPoly({len(self._t)} terms)"


# variable positions inside a (p, x, y, z) exponent tuple
VAR_INDEX = {"p": 0, "x": 1, "y": 2, "z": 3}


def _var_index(v) -> int:
    if isinstance(v, str):
        try:
            return VAR_INDEX[v]
        except KeyError:
            raise AlgebraError(f"unknown variable {v!r}") from None
    return int(v)


class TruncSeries:
    """Polynomial in ``(p, x, y, z)`` with every term of total degree <= ``order``."""

    __slots__ = ("order", "_t")

    def __init__(self, order: int, terms: Mapping[tuple[int, int, int, int], int] | None = None):
        if order < 0:
            raise AlgebraError("order must be nonnegative")
        self.order = order
        self._t = {k: v for k, v in (terms or {}).items() if v and sum(k) <= order}

    @classmethod
    def one(cls, order: int) -> TruncSeries:
        return cls(order, {(0, 0, 0, 0): 1})

    @classmethod
    def variable(cls, v, order: int) -> TruncSeries:
        k = [0, 0, 0, 0]
        k[_var_index(v)] = 1
        return cls(order, {tuple(k): 1})

    @property
    def terms(self) -> dict[tuple[int, int, int, int], int]:
        return dict(self._t)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self._t == other._t

    def __repr__(self):
        return f"TruncSeries(order={self.order}, {len(self._t)} terms)"

    def __add__(self, other):
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, 0) + v
        return TruncSeries(min(self.order, other.order), out)

    def __mul__(self, other):
        r = min(self.order, other.order)
        out: dict[tuple[int, ...], int] = {}
        for k1, v1 in self._t.items():
            d1 = sum(k1)
            for k2, v2 in other._t.items():
                if d1 + sum(k2) > r:
                    continue
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2], k1[3] + k2[3])
                out[k] = out.get(k, 0) + v1 * v2
        return TruncSeries(r, out)

    def substitute(self, v) -> TruncSeries:
        """Image under ``v -> p + v + p*v`` (the shifted form of ``t -> q*t``)."""
        i = _var_index(v)
        if i == 0:
            raise AlgebraError("substitution variable must be x, y or z")
        r = self.order
        out: dict[tuple[int, ...], int] = {}
        for k, c in self._t.items():
            base = sum(k)
            kv = k[i]
            # v^kv -> sum_j C(kv,j) v^j p^(kv-j) (1+p)^j
            for j in range(kv + 1):
                cj = c * comb(kv, j)
                for l in range(min(j, r - base) + 1):
                    kk = list(k)
                    kk[i] = j
                    kk[0] = k[0] + kv - j + l
                    kk = tuple(kk)
                    out[kk] = out.get(kk, 0) + cj * comb(j, l)
        return TruncSeries(r, out)

    def mul_binomial(self, v, a: int) -> TruncSeries:
        """Multiply by ``(1 + v)^a`` and truncate."""
        if a < 0:
            raise AlgebraError("binomial exponent must be nonnegative")
        i = _var_index(v)
        r = self.order
        out: dict[tuple[int, ...], int] = {}
        for k, c in self._t.items():
            room = r - sum(k)
            for j in range(min(a, room) + 1):
                kk = list(k)
                kk[i] += j
                kk = tuple(kk)
                out[kk] = out.get(kk, 0) + c * comb(a, j)
        return TruncSeries(r, out)

    def restrict_p(self) -> list[int]:
        """Coefficients of ``p^0..p^order`` after setting ``x = y = z = 0``."""
        out = [0] * (self.order + 1)
        for (ep, ex, ey, ez), v in self._t.items():
            if ex == ey == ez == 0:
                out[ep] = v
        return out


class RatPoly:
    """Polynomial in ``n`` with exact rational coefficients, low degree first."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def from_roots_times(cls, scale, roots=(), factor: Sequence = (1,)) -> RatPoly:
        """``scale * prod(n - root) * factor(n)``; convenient for closed-form fixtures."""
        p = cls([scale]) * cls(factor)
        for r0 in roots:
            p = p * cls([-r0, 1])
        return p

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int | None:
        return len(self._c) - 1 if self._c else None

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __add__(self, other):
        n = max(len(self._c), len(other._c))
        a = self._c + (Fraction(0),) * (n - len(self._c))
        b = other._c + (Fraction(0),) * (n - len(other._c))
        return RatPoly(x + y for x, y in zip(a, b))

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if not isinstance(other, RatPoly):
            return RatPoly(c * other for c in self._c)
        if not self._c or not other._c:
            return RatPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, x in enumerate(self._c):
            for j, y in enumerate(other._c):
                out[i + j] += x * y
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RatPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * n + c
        return acc

    def to_text(self, var: str = "n") -> str:
        if not self._c:
            return "0"
        parts = []
        for e in range(len(self._c) - 1, -1, -1):
            c = self._c[e]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def factored_text(self, var: str = "n") -> str:
        """``content * n^k * (primitive integer polynomial)``, e.g. ``1/4 * n^4``."""
        if not self._c:
            return "0"
        low = next(i for i, c in enumerate(self._c) if c)
        rest = self._c[low:]
        den = 1
        for c in rest:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in rest]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if ints[-1] < 0:
            g = -g
        content = Fraction(g, den)
        prim = RatPoly(x // g for x in ints)
        parts = [] if content == 1 else [str(content)]
        if low:
            parts.append(var if low == 1 else f"{var}^{low}")
        if prim.degree:
            parts.append(f"({prim.to_text(var)})")
        return " * ".join(parts) or "1"

    def __repr__(self):
        return f"RatPoly({self.to_text()!r})"


def qbracket(j: int) -> UniPoly:
    """``[j] = 1 + q + ... + q^(j-1)``."""
    return UniPoly([1] * j)


@lru_cache(maxsize=None)
def qfactorial(m: int) -> UniPoly:
    if m < 0:
        raise AlgebraError("q-factorial of a negative integer")
    if m == 0:
        return UniPoly(1)
    return qfactorial(m - 1) * qbracket(m)


def gaussian_multinomial(a: Sequence[int]) -> UniPoly:
    """``[a_1+...+a_k]! / ([a_1]! ... [a_k]!)``, by iterated exact division."""
    if any(x < 0 for x in a):
        raise AlgebraError("composition entries must be nonnegative")
    out = qfactorial(sum(a))
    for x in a:
        out = out.exact_div(qfactorial(x))
    return out


def multinomial(a: Sequence[int]) -> int:
    return factorial(sum(a)) // prod(factorial(x) for x in a)


@lru_cache(maxsize=None)
def stirling2(r: int, j: int) -> int:
    """Stirling number of the second kind ``S(r, j)``."""
    if r < 0 or j < 0:
        raise AlgebraError("Stirling indices must be nonnegative")
    if j > r:
        return 0
    if r == j:
        return 1
    if j == 0:
        return 0
    return j * stirling2(r - 1, j) + stirling2(r - 1, j - 1)


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1, B_0 = 1
    b = [Fraction(1)]
    for n in range(1, m + 1):
        b.append(-sum(comb(n + 1, k) * b[k] for k in range(n)) / (n + 1))
    return tuple(b)


def bernoulli(r: int) -> Fraction:
    """Bernoulli number ``B_r`` for even ``r >= 2``."""
    if r < 2 or r % 2:
        raise AlgebraError("only even indices r >= 2 are supported")
    return _bernoulli_table(r)[r]


class NewtonInterpolator:
    """Incremental Newton-form interpolation over the rationals.

    Points may be appended one at a time; each addition costs O(k) and
    leaves the earlier divided differences untouched.
    """

    def __init__(self):
        self.xs: list[int] = []
        self._diag: list[Fraction] = []  # last row of the divided-difference table
        self.coeffs: list[Fraction] = []  # Newton coefficients

    def add(self, x, y) -> None:
        if x in self.xs:
            raise AlgebraError(f"duplicate abscissa {x}")
        row = [Fraction(y)]
        for k, xk in enumerate(reversed(self.xs)):
            prev = self._diag[k]
            row.append((row[-1] - prev) / (x - xk))
        self.xs.append(x)
        self._diag = row
        self.coeffs.append(row[-1])

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for k in range(len(self.coeffs) - 1, -1, -1):
            acc = acc * (x - self.xs[k]) + self.coeffs[k]
        return acc

    def poly(self) -> RatPoly:
        out = RatPoly()
        basis = RatPoly([1])
        for k, c in enumerate(self.coeffs):
            out = out + basis * c
            basis = basis * RatPoly([-self.xs[k], 1])
        return out


def interpolate(points: Iterable[tuple[int, object]]) -> RatPoly:
    """The unique polynomial of degree < len(points) through ``points``."""
    pts = list(points)
    if not pts:
        raise AlgebraError("need at least one point")
    ni = NewtonInterpolator()
    for x, y in pts:
        ni.add(x, y)
    return ni.poly()
