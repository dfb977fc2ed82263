"""Sieve construction and exact arithmetic-function kernels.

Everything is derived from a smallest-prime-factor table, so every value is
exact; nothing is stored beyond the table itself.
"""
from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._backend import kernels
from ._fallback import sincos_turns
from .errors import InvalidArgument, OutOfRange

Factorization = list[tuple[int, int]]

ARITH_FUNCTIONS = ("mu", "phi", "big_omega", "small_omega", "omega_k")


@dataclass(frozen=True, eq=False)
class FactorTable:
    """Smallest prime factor of every integer up to ``limit``.

    ``spf[n]`` is the least prime dividing n for 2 <= n <= limit;
    ``spf[0] = 0`` and ``spf[1] = 1`` are placeholders. Arrays are read-only.
    """

    limit: int
    spf: np.ndarray
    primes: np.ndarray

    @cached_property
    def spf_exponents(self) -> np.ndarray:
        """Multiplicity of ``spf[n]`` in n."""
        e = kernels.spf_exponents(self.spf)
        e.setflags(write=False)
        return e

    def is_prime(self, n: int) -> bool:
        _check_range(self, n)
        return n >= 2 and int(self.spf[n]) == n

    def __repr__(self) -> str:
        return f"FactorTable(limit={self.limit}, primes={self.primes.size})"


def build_factor_table(limit: int) -> FactorTable:
    """Run the linear sieve up to ``limit`` (O(limit) time)."""
    limit = int(limit)
    if limit < 1:
        raise InvalidArgument(f"sieve limit must be >= 1, got {limit}")
    if limit >= 2**32:
        raise InvalidArgument("sieve limit must stay below 2**32 (uint32 table)")
    spf, primes = kernels.linear_sieve(limit)
    spf.setflags(write=False)
    primes.setflags(write=False)
    return FactorTable(limit, spf, primes)


def _check_range(t: FactorTable, n: int) -> None:
    if n < 1 or n > t.limit:
        raise OutOfRange(f"{n} is outside [1, {t.limit}]")


def factorize(t: FactorTable, n: int) -> Factorization:
    """Prime factorization as ascending ``(p, exponent)`` pairs; ``[]`` for 1."""
    n = int(n)
    _check_range(t, n)
    pairs: Factorization = []
    spf = t.spf
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        pairs.append((p, e))
    return pairs


def arith_value(t: FactorTable, n: int, which: str, k: int | None = None) -> int:
    """Exact value of mu, phi, Omega, omega or Omega_k at n."""
    if which not in ARITH_FUNCTIONS:
        raise InvalidArgument(f"unknown arithmetic function {which!r}")
    fac = factorize(t, n)
    if which == "mu":
        return 0 if any(e > 1 for _, e in fac) else (-1) ** len(fac)
    if which == "phi":
        return math.prod((p - 1) * p ** (e - 1) for p, e in fac)
    if which == "big_omega":
        return sum(e for _, e in fac)
    if which == "small_omega":
        return len(fac)
    if k is None or k < 0:
        raise InvalidArgument("omega_k needs an integer k >= 0")
    return sum(e**k for _, e in fac)


def mobius(t: FactorTable, n: int) -> int:
    return arith_value(t, n, "mu")


def totient(t: FactorTable, n: int) -> int:
    return arith_value(t, n, "phi")


def big_omega(t: FactorTable, n: int) -> int:
    return arith_value(t, n, "big_omega")


def divisors(t: FactorTable, n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(t, n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def ramanujan_sum(t: FactorTable, q: int, n: int, method: str = "mobius_formula") -> float:
    """c_q(n), the sum of e(an/q) over residues a coprime to q.

    ``mobius_formula`` evaluates sum_{d | (q, n)} d mu(q/d) exactly;
    ``exponential`` sums the roots of unity with compensated accumulation.
    """
    q, n = int(q), int(n)
    if q < 1:
        raise InvalidArgument(f"modulus must be >= 1, got {q}")
    if method == "mobius_formula":
        g = math.gcd(q, n)
        return float(sum(d * mobius(t, q // d) for d in divisors(t, g)))
    if method == "exponential":
        a = np.arange(1, q + 1, dtype=np.int64)
        a = a[np.gcd(a, q) == 1]
        c, _ = sincos_turns(((a * (n % q)) % q) / q)
        return math.fsum(c)
    raise InvalidArgument(f"unknown method {method!r}")


def gcd_class_exp_sum(q: int, g: int, a: int) -> complex:
    """sum of e(ra/q) over 1 <= r <= q with gcd(r, q) = g."""
    r = np.arange(1, q + 1, dtype=np.int64)
    r = r[np.gcd(r, q) == g]
    c, s = sincos_turns(((r * a) % q) / q)
    return complex(math.fsum(c), math.fsum(s))


def dirichlet_convolve_point(
    t: FactorTable, f: Callable[[int], float], g: Callable[[int], float], q: int
) -> float:
    """(f * g)(q) = sum_{d | q} f(d) g(q / d)."""
    return math.fsum(f(d) * g(q // d) for d in divisors(t, q))


def sigma_s(t: FactorTable, q: int, s: float) -> float:
    """Divisor power sum sum_{d | q} d**s."""
    return math.fsum(float(d) ** s for d in divisors(t, q))


def rho(t: FactorTable, s: float, z: complex, q: int) -> complex:
    """prod over primes p | q of (1 - z / p**s)."""
    out = complex(1.0)
    for p, _ in factorize(t, q):
        out *= 1 - z / p**s
    return out
