"""Rational approximation, Farey fractions, and the major/minor arc dissection."""
from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple

from .errors import InvalidArgument


@total_ordering
@dataclass(frozen=True)
class Rational:
    """Reduced fraction a/q ordered by value; ``source`` records where it came from."""

    a: int
    q: int
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if self.q < 1 or math.gcd(self.a, self.q) != 1:
            raise InvalidArgument(f"{self.a}/{self.q} is not a reduced fraction with q >= 1")

    def __float__(self) -> float:
        return self.a / self.q

    def as_fraction(self) -> Fraction:
        return Fraction(self.a, self.q)

    def __lt__(self, other: Rational) -> bool:
        if not isinstance(other, Rational):
            return NotImplemented
        return self.a * other.q < other.a * self.q


class Approximation(NamedTuple):
    rational: Rational
    gap: float  # |alpha - a/q|


def _convergents(num: int, den: int) -> Iterator[tuple[int, int]]:
    # continued-fraction convergents of num/den (den > 0) in exact integers
    p0, q0, p1, q1 = 0, 1, 1, 0
    while den:
        c, rem = divmod(num, den)
        p0, q0, p1, q1 = p1, q1, c * p1 + p0, c * q1 + q0
        yield p1, q1
        num, den = den, rem


def convergents(alpha: float) -> list[Rational]:
    """All continued-fraction convergents of the exact binary value of alpha."""
    num, den = float(alpha).as_integer_ratio()
    return [Rational(p, q, f"convergent[{i}]") for i, (p, q) in enumerate(_convergents(num, den))]


def _exact_ratio(alpha) -> tuple[int, int]:
    if isinstance(alpha, Rational):
        return alpha.a, alpha.q
    if isinstance(alpha, Fraction):
        return alpha.numerator, alpha.denominator
    return float(alpha).as_integer_ratio()


def dirichlet_approx(alpha, Q: float) -> Approximation:
    """Last convergent of alpha with denominator <= Q.

    Satisfies q <= Q and |alpha - a/q| < 1/(q Q). A float alpha is expanded
    exactly (its binary value) and the gap is reported in double precision,
    so alpha = 1/3 gives 1/3 with gap 0; Fraction input gives the exact gap.
    """
    if not Q >= 1:
        raise InvalidArgument(f"Q must be >= 1, got {Q}")
    qmax = math.floor(Q)
    num, den = _exact_ratio(alpha)
    best = (num // den, 1, 0)
    for i, (p, q) in enumerate(_convergents(num, den)):
        if q > qmax:
            break
        best = (p, q, i)
    p, q, i = best
    if isinstance(alpha, (Fraction, Rational)):
        gap = float(abs(Fraction(num, den) - Fraction(p, q)))
    else:
        gap = abs(float(alpha) - p / q)
    return Approximation(Rational(p, q, f"convergent[{i}]"), gap)


def farey(Q: int) -> Iterator[Rational]:
    """Reduced fractions in [0, 1] with denominator <= Q, ascending."""
    Q = int(Q)
    if Q < 1:
        raise InvalidArgument(f"Q must be >= 1, got {Q}")
    a, b, c, d = 0, 1, 1, Q
    yield Rational(0, 1, "farey")
    while c <= Q:
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        yield Rational(a, b, "farey")


def farey_count(Q: int) -> int:
    """1 + sum_{q <= Q} phi(q)."""
    return sum(1 for _ in farey(Q))


@dataclass(frozen=True)
class Major:
    q: int
    a: int
    beta: float  # alpha - a/q


@dataclass(frozen=True)
class Minor:
    q: int
    a: int
    gap: float  # |alpha - a/q| for the approximation with q <= N/Q


@dataclass(frozen=True)
class ArcSystem:
    """Major arcs |alpha - a/q| <= Q/N around a/q with q <= Q = (log N)**B.

    Construction fails unless 2 Q**3 < N, which makes the arcs pairwise
    disjoint (distinct centres are at least 1/Q**2 apart).
    """

    N: int
    B: float

    def __post_init__(self):
        if self.N < 3 or not self.B > 0:
            raise InvalidArgument("need N >= 3 and B > 0")
        Q = self.Q
        if not 2.0 * Q**3 < self.N:
            raise InvalidArgument(
                f"major arcs may overlap: 2 Q^3 = {2 * Q**3:.6g} >= N = {self.N}"
            )

    @property
    def Q(self) -> float:
        return math.log(self.N) ** self.B

    @property
    def radius(self) -> float:
        return self.Q / self.N

    @property
    def qmax(self) -> int:
        return max(1, math.floor(self.Q))

    def centres(self) -> list[Rational]:
        """All a/q with 1 <= q <= Q, 0 <= a <= q, (a, q) = 1, ascending."""
        return list(farey(self.qmax))

    def intervals(self) -> list[tuple[Rational, float, float]]:
        """Major arcs clipped to [0, 1] as (centre, lo, hi), ascending."""
        r = self.radius
        return [(c, max(0.0, float(c) - r), min(1.0, float(c) + r)) for c in self.centres()]

    def minor_intervals(self) -> list[tuple[float, float]]:
        """Complement of the major arcs in [0, 1]."""
        out = []
        arcs = self.intervals()
        for (_, _, hi), (_, lo, _) in zip(arcs, arcs[1:]):
            if lo > hi:
                out.append((hi, lo))
        return out

    def major_measure(self) -> float:
        return math.fsum(hi - lo for _, lo, hi in self.intervals())

    def minor_measure(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.minor_intervals())


def classify_arc(alpha: float, sys: ArcSystem) -> Major | Minor:
    """Locate alpha in the dissection of [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgument(f"alpha={alpha} outside [0, 1]")
    r = sys.radius
    for q in range(1, sys.qmax + 1):
        a = math.floor(alpha * q + 0.5)
        if math.gcd(a, q) != 1:
            continue
        beta = alpha - a / q
        if abs(beta) <= r:
            return Major(q, a, beta)
    approx = dirichlet_approx(alpha, sys.N / sys.Q)
    return Minor(approx.rational.q, approx.rational.a, approx.gap)
