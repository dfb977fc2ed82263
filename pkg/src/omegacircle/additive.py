"""Additive functions given by a prime-power rule, and their value tables."""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InvalidArgument, OutOfRange
from .ntcore import FactorTable, factorize

Rule = Callable[[np.ndarray, np.ndarray], "np.ndarray | float"]

_CHUNK = 1 << 22


@dataclass(frozen=True)
class AdditiveFunction:
    """f(n) = sum of rule(p, a) over the prime powers p**a exactly dividing n.

    ``rule`` receives numpy arrays of primes and exponents (exponent >= 1)
    and should broadcast; scalar-only rules are vectorized automatically.
    """

    rule: Rule
    name: str
    totally_additive: bool = False

    def at_prime_powers(self, p, ell) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        ell = np.asarray(ell, dtype=np.float64)
        try:
            out = np.asarray(self.rule(p, ell), dtype=np.float64)
        except (TypeError, ValueError):
            out = np.vectorize(lambda a, b: float(self.rule(a, b)), otypes=[np.float64])(p, ell)
        if out.shape != np.broadcast(p, ell).shape:
            out = np.broadcast_to(out, np.broadcast(p, ell).shape)
        return out

    def __call__(self, t: FactorTable, n: int) -> float:
        fac = factorize(t, n)
        if not fac:
            return 0.0
        p, e = np.array(fac, dtype=np.float64).T
        return float(self.at_prime_powers(p, e).sum())


def make_omega_k(k: int) -> AdditiveFunction:
    """Omega_k(n) = sum of a_i**k over the exponents of n (k=0: omega, k=1: Omega)."""
    k = int(k)
    if k < 0:
        raise InvalidArgument(f"k must be >= 0, got {k}")
    name = {0: "omega", 1: "Omega"}.get(k, f"Omega_{k}")
    return AdditiveFunction(lambda p, ell: np.power(ell, k), name, totally_additive=(k == 1))


OMEGA = make_omega_k(1)
SMALL_OMEGA = make_omega_k(0)

NAMED = {"omega": SMALL_OMEGA, "Omega": OMEGA}


def by_name(name: str) -> AdditiveFunction:
    """``omega``, ``Omega`` or ``Omega_k`` for integer k."""
    if name in NAMED:
        return NAMED[name]
    if name.startswith("Omega_") and name[6:].isdigit():
        return make_omega_k(int(name[6:]))
    raise InvalidArgument(f"unknown additive function {name!r}")


def is_in_F0(f: AdditiveFunction, t: FactorTable) -> bool:
    """True when f(p) = 1 at every prime p up to the sieve limit."""
    if t.primes.size == 0:
        return True
    return bool(np.all(f.at_prime_powers(t.primes, 1.0) == 1.0))


def cap_F(f: AdditiveFunction, t: FactorTable, X: int) -> float:
    """max |f(p**l)| over prime powers p**l <= X."""
    X = int(X)
    if X < 2:
        raise InvalidArgument(f"X must be >= 2, got {X}")
    if X > t.limit:
        raise OutOfRange(f"X={X} exceeds sieve limit {t.limit}")
    primes = t.primes[: np.searchsorted(t.primes, X, side="right")].astype(np.int64)
    best = 0.0
    ell = 1
    while primes.size:
        best = max(best, float(np.abs(f.at_prime_powers(primes, ell)).max()))
        ell += 1
        primes = primes[primes <= _iroot(X, ell)]
    return best


def _iroot(X: int, ell: int) -> int:
    r = int(round(X ** (1.0 / ell)))
    while r > 0 and r**ell > X:
        r -= 1
    while (r + 1) ** ell <= X:
        r += 1
    return r


def value_table(f: AdditiveFunction, t: FactorTable, N: int) -> np.ndarray:
    """Array v of length N + 1 with v[n] = f(n) for 1 <= n <= N and v[0] = 0."""
    N = int(N)
    if N < 0 or N > t.limit:
        raise OutOfRange(f"N={N} outside [0, {t.limit}]")
    spf = t.spf[: N + 1]
    exps = t.spf_exponents[: N + 1]
    v = np.zeros(N + 1, dtype=np.float64)
    # increment at the leading prime power: rule(p, e) - rule(p, e - 1)
    for lo in range(2, N + 1, _CHUNK):
        hi = min(lo + _CHUNK, N + 1)
        p = spf[lo:hi]
        e = exps[lo:hi]
        inc = f.at_prime_powers(p, e).copy()
        deeper = e > 1
        if deeper.any():
            inc[deeper] -= f.at_prime_powers(p[deeper], e[deeper] - 1)
        v[lo:hi] = inc
    kernels.accumulate_additive(np.ascontiguousarray(spf), v)
    return v


def integer_table(values: np.ndarray) -> np.ndarray:
    """Convert an integer-valued table to int64, refusing non-integers."""
    out = np.rint(values).astype(np.int64)
    if not np.array_equal(out, values):
        raise InvalidArgument("value table is not integer-valued")
    return out
