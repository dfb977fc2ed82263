"""Closed-form exponential-sum bounds (implied constant 1) and a ratio scanner.

log is the natural logarithm throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diophantine import Rational, convergents, dirichlet_approx, farey
from .errors import InvalidArgument
from .expsum import exp_sum_many

KINDS = ("main_F0", "refined", "vinogradov", "drzz", "semiprime", "madhudas", "upsilon")
REFERENCE_KINDS = ("vinogradov", "vinogradov_lambda", "drzz", "semiprime", "madhudas")


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 0.5:
        raise InvalidArgument(f"delta must lie in (0, 1/2), got {delta}")


def _log_factor(X: float, Ff: float) -> float:
    L = math.log(X)
    return L**4 + L * Ff


def _main_form(X: float, q: float, delta: float, Ff: float, upsilon_factor: float) -> float:
    _check_delta(delta)
    if X < 3 or q < 1:
        raise InvalidArgument("need X >= 3 and q >= 1")
    head = X * upsilon_factor / q**delta + X ** (5 / 6) + X ** (1 - delta) * q**delta
    return head * _log_factor(X, Ff)


def main_bound(X: float, q: float, delta: float, Ff: float) -> float:
    """(X/q^D + X^(5/6) + X^(1-D) q^D) ((log X)^4 + log X * F_f(X))."""
    return _main_form(X, q, delta, Ff, 1.0)


def upsilon_bound(X: float, q: float, delta: float, upsilon: float, Ff: float) -> float:
    """main_bound with the first term scaled by max(1, upsilon^D), for |alpha - a/q| <= upsilon/q^2."""
    if not upsilon > 0:
        raise InvalidArgument("upsilon must be positive")
    _check_delta(delta)
    return _main_form(X, q, delta, Ff, max(1.0, upsilon**delta))


def refined_bound(x: float, y: float, gamma: float, alpha, a: int, q: int) -> float:
    """x (q + x|alpha q - a|)^-g + y + x^(1-g) (q + x|alpha q - a|)^g.

    ``alpha`` may be a float, a Fraction or a Rational; |alpha q - a| is
    formed exactly, so alpha = a/q given exactly reproduces simple_bound.
    """
    if x < 1 or y < 1 or not gamma > 0 or q < 1:
        raise InvalidArgument("need x, y >= 1, gamma > 0, q >= 1")
    if isinstance(alpha, Rational):
        alpha = alpha.as_fraction()
    gap = abs(Fraction(alpha) * q - a)
    w = q + x * float(gap) if gap else q
    return x * w ** (-gamma) + y + x ** (1 - gamma) * w**gamma


def simple_bound(x: float, y: float, gamma: float, q: int) -> float:
    """x q^-g + y + x^(1-g) q^g."""
    return x * q ** (-gamma) + y + x ** (1 - gamma) * q**gamma


def reference_bound(kind: str, X: float, q: float, extra: float | None = None) -> float:
    """Bounds from the literature that the F_0 bound is compared against.

    ``vinogradov``: primes, (X/sqrt q + X^(4/5) + sqrt(X q)) (log X)^3.
    ``vinogradov_lambda``: von Mangoldt weights, same shape with (log X)^4.
    ``semiprime``, ``drzz``: the two omega bounds with fractional log powers.
    ``madhudas``: needs ``extra=R`` with 2 <= R <= q <= X/R.
    """
    if X < 3 or q < 1:
        raise InvalidArgument("need X >= 3 and q >= 1")
    L = math.log(X)
    if kind == "vinogradov":
        return (X / math.sqrt(q) + X**0.8 + math.sqrt(X) * math.sqrt(q)) * L**3
    if kind == "vinogradov_lambda":
        return (X / math.sqrt(q) + X**0.8 + math.sqrt(X) * math.sqrt(q)) * L**4
    if kind == "semiprime":
        return (
            X / q ** (1 / 6) * L ** (7 / 3)
            + X ** (16 / 17) * L ** (39 / 17)
            + X ** (7 / 8) * q ** (1 / 8) * L ** (9 / 4)
        )
    if kind == "drzz":
        return (
            X / q**0.25 * L**2.5
            + X ** (6 / 7) * L ** (19 / 7)
            + X**0.75 * q**0.25 * L**2.5
        )
    if kind == "madhudas":
        if extra is None:
            raise InvalidArgument("madhudas needs R")
        R = float(extra)
        if not (2 <= R <= q <= X / R):
            raise InvalidArgument(f"madhudas needs 2 <= R <= q <= X/R, got R={R}, q={q}")
        LL = math.log(L)
        return X * LL / L + X * LL * L**1.5 / math.sqrt(R)
    raise InvalidArgument(f"unknown reference bound {kind!r}")


@dataclass(frozen=True)
class BoundSpec:
    kind: str = "main_F0"
    delta: float = 0.25
    upsilon: float = 1.0
    R: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown bound kind {self.kind!r}")
        _check_delta(self.delta)
        if self.kind == "madhudas" and (self.R is None or self.R < 2):
            raise InvalidArgument("madhudas needs R >= 2")

    def evaluate(self, X: float, q: int, Ff: float, alpha: float | None = None, a: int | None = None) -> float:
        if self.kind == "main_F0":
            return main_bound(X, q, self.delta, Ff)
        if self.kind == "upsilon":
            return upsilon_bound(X, q, self.delta, self.upsilon, Ff)
        if self.kind == "refined":
            # general principle applied to S / log-factor with x = X, y = X^(5/6)
            return _log_factor(X, Ff) * refined_bound(X, X ** (5 / 6), self.delta, alpha, a, q)
        return reference_bound(self.kind, X, q, self.R)


@dataclass(frozen=True)
class RatioRecord:
    alpha: float
    a: int
    q: int
    X: int
    abs_S: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.abs_S / self.bound


STRESS_IRRATIONALS = {
    "golden": (math.sqrt(5) - 1) / 2,
    "sqrt2": math.sqrt(2) - 1,
    "sqrt3": math.sqrt(3) - 1,
    "e": math.e - 2,
}


def alpha_grid(source: str, *, Q: int = 50, n: int = 1000, seed: int | None = None) -> np.ndarray:
    """Test points in [0, 1).

    ``farey``: the Farey fractions of order Q (1/1 dropped, it repeats 0/1);
    ``random``: n uniform draws from PCG64 seeded with ``seed``;
    ``convergent-stress``: convergents with denominator <= Q of a few badly
    approximable numbers, together with the numbers themselves.
    """
    if source == "farey":
        return np.array([float(r) for r in farey(Q) if r.a < r.q])
    if source == "random":
        if seed is None:
            raise InvalidArgument("random alphas need a seed")
        return np.random.default_rng(seed).random(n)
    if source == "convergent-stress":
        pts = set()
        for x in STRESS_IRRATIONALS.values():
            pts.add(x)
            pts.update(float(c) for c in convergents(x) if c.q <= Q)
        return np.array(sorted(p for p in pts if 0.0 <= p < 1.0))
    raise InvalidArgument(f"unknown alpha source {source!r}")


def ratio_scan(values, Ff_of_X, Xs, alphas, bound_spec: BoundSpec, threads: int = 1) -> list[RatioRecord]:
    """|S_f(alpha; X)| / bound for every (X, alpha), sorted by X then alpha.

    Each alpha is paired with a/q = dirichlet_approx(alpha, sqrt X), which
    satisfies |alpha - a/q| <= 1/q^2 and (a, q) = 1. ``Ff_of_X`` maps X to
    F_f(X) (see additive.cap_F).
    """
    alphas = np.sort(np.asarray(alphas, dtype=np.float64))
    records = []
    for X in sorted(set(int(x) for x in Xs)):
        S = exp_sum_many(values, alphas, X, threads=threads)
        Ff = float(Ff_of_X(X))
        for alpha, s in zip(alphas, S):
            approx = dirichlet_approx(float(alpha), math.sqrt(X))
            a, q = approx.rational.a, approx.rational.q
            bound = bound_spec.evaluate(X, q, Ff, float(alpha), a)
            records.append(RatioRecord(float(alpha), a, q, X, abs(complex(s)), bound))
    return records
