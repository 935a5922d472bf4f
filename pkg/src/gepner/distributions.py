"""Reference moment sequences and exact moment-matching verdicts."""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .algebra import bernoulli

__all__ = ["Candidate", "Verdict", "logistic_moment", "normal_moment", "reference_moment", "classify"]


class Candidate(enum.Enum):
    NORMAL = "normal"
    LOGISTIC = "logistic"


def logistic_moment(r: int) -> Fraction:
    """r-th moment of the unit-variance logistic law: (2^r - 2) |B_r| 3^(r/2)."""
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    if r == 0:
        return Fraction(1)
    if r % 2:
        return Fraction(0)
    return (2**r - 2) * abs(bernoulli(r)) * 3 ** (r // 2)


def normal_moment(r: int) -> int:
    """r-th moment of the standard normal law: (r-1)!! for even r, else 0."""
    if r < 0:
        raise ValueError("moment order must be nonnegative")
    if r % 2:
        return 0
    out = 1
    for k in range(1, r, 2):
        out *= k
    return out


def reference_moment(candidate: Candidate | str, r: int) -> Fraction:
    c = Candidate(candidate) if not isinstance(candidate, Candidate) else candidate
    return Fraction(normal_moment(r)) if c is Candidate.NORMAL else logistic_moment(r)


@dataclass(frozen=True)
class Verdict:
    candidate: Candidate
    per_order: tuple[tuple[int, bool], ...]

    @property
    def first_mismatch(self) -> int | None:
        return next((r for r, ok in self.per_order if not ok), None)

    @property
    def overall(self) -> str:
        r = self.first_mismatch
        return "MATCHES-ALL-TESTED" if r is None else f"REJECTED-AT-ORDER-{r}"


def classify(kappas: Mapping[int, Fraction], candidates=(Candidate.NORMAL, Candidate.LOGISTIC)) -> dict[Candidate, Verdict]:
    """Compare limiting standardized moments with each reference law, exactly.

    A match on every tested order is reported as such; it is not a claim that
    the limit law is identified.
    """
    orders = sorted(r for r in kappas if r >= 4 and r % 2 == 0)
    if not orders:
        raise ValueError("need at least one even order >= 4")
    out = {}
    for cand in candidates:
        cand = Candidate(cand) if not isinstance(cand, Candidate) else cand
        checks = tuple((r, Fraction(kappas[r]) == reference_moment(cand, r)) for r in orders)
        out[cand] = Verdict(cand, checks)
    return out
