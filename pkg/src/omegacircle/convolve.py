"""Exact ternary sums r_f(N) = sum over n1 + n2 + n3 = N of f(n1) f(n2) f(n3).

Two independent routes: an O(N^2) two-stage direct convolution, and a
number-theoretic transform over three NTT primes with CRT reconstruction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InvalidArgument, OutOfRange, PrecisionError

DIRECT_LIMIT = 10**4

# (prime, primitive root); each p - 1 is divisible by 2**25 or more
NTT_PRIMES = ((2013265921, 31), (469762049, 3), (167772161, 3))
MAX_TRANSFORM_LENGTH = 1 << 25
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class TripleCountResult:
    N: int
    value: int
    method: str


def _int_values(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype.kind == "f":
        out = np.rint(arr).astype(np.int64)
        if not np.array_equal(out, arr):
            raise InvalidArgument("values must be integers")
        return out
    return np.ascontiguousarray(arr, dtype=np.int64)


def pair_counts(values, mmax: int, scatter: bool = False) -> np.ndarray:
    """c2[m] = sum_{i + j = m} f(i) f(j) for m <= mmax (gather or scatter loop order)."""
    return kernels.pair_counts(_int_values(values), int(mmax), bool(scatter))


def r_omega_direct(values, N: int, *, limit: int | None = DIRECT_LIMIT, scatter: bool = False) -> int:
    """r_f(N) by direct convolution; O(N^2), capped at ``limit`` unless limit=None."""
    N = int(N)
    f = _int_values(values)
    if N < 3:
        return 0
    if N > f.shape[0] - 1:
        raise OutOfRange(f"N={N} exceeds table length")
    if limit is not None and N > limit:
        raise InvalidArgument(f"direct route is limited to N <= {limit}; pass limit=None to override")
    return int(kernels.triple_direct(f, N, bool(scatter)))


def _transform_bound(f: np.ndarray, Nmax: int) -> int:
    # r(n) <= max|f|^3 * #{compositions of n into 3 positive parts}
    fmax = int(np.abs(f[1 : Nmax + 1]).max(initial=0))
    return fmax**3 * ((Nmax - 1) * (Nmax - 2) // 2)


def r_omega_transform(values, Nmax: int) -> np.ndarray:
    """Array r with r[n] = r_f(n) for 0 <= n <= Nmax, all entries exact.

    Raises PrecisionError when the a-priori bound on |r| is not below the
    product of the moduli (CRT would be ambiguous).
    """
    Nmax = int(Nmax)
    f = _int_values(values)
    if Nmax > f.shape[0] - 1:
        raise OutOfRange(f"Nmax={Nmax} exceeds table length")
    if Nmax < 0:
        raise InvalidArgument("Nmax must be >= 0")
    out_len = Nmax + 1
    if Nmax < 3:
        return np.zeros(out_len, dtype=np.int64)
    if np.any(f[1 : Nmax + 1] < 0):
        raise InvalidArgument("transform route expects non-negative values")
    bound = _transform_bound(f, Nmax)
    modulus = 1
    for p, _ in NTT_PRIMES:
        modulus *= p
    if bound >= modulus:
        raise PrecisionError(f"|r| may reach {bound}, beyond CRT range {modulus}")
    L = 1 << (3 * Nmax).bit_length()
    if L > MAX_TRANSFORM_LENGTH:
        raise InvalidArgument(f"Nmax={Nmax} needs transform length {L} > {MAX_TRANSFORM_LENGTH}")

    residues = []
    for p, g in NTT_PRIMES:
        a = np.zeros(L, dtype=np.uint64)
        a[1 : Nmax + 1] = f[1 : Nmax + 1] % p
        kernels.ntt(a, p, g, False)
        kernels.pointwise_cube_mod(a, p)
        kernels.ntt(a, p, g, True)
        residues.append(a[:out_len].copy())
    return _garner(residues, bound)


def _garner(residues: list[np.ndarray], bound: int) -> np.ndarray:
    (p1, _), (p2, _), (p3, _) = NTT_PRIMES
    r1, r2, r3 = (r.astype(np.int64) for r in residues)
    # x = r1 + p1 k2 + p1 p2 k3 with 0 <= k2 < p2, 0 <= k3 < p3
    k2 = ((r2 - r1 % p2) % p2) * pow(p1, -1, p2) % p2
    x12_mod_p3 = (r1 % p3 + (p1 % p3) * (k2 % p3)) % p3
    k3 = ((r3 - x12_mod_p3) % p3) * pow(p1 * p2 % p3, -1, p3) % p3
    if bound <= _INT64_MAX:
        # exact: every term is bounded by the true value, which fits
        return r1 + p1 * k2 + (p1 * p2) * k3
    return np.array(
        [int(a) + p1 * int(b) + p1 * p2 * int(c) for a, b, c in zip(r1, k2, k3)], dtype=object
    )


def r_omega(values, N: int, method: str = "transform") -> TripleCountResult:
    if method == "direct":
        return TripleCountResult(int(N), r_omega_direct(values, N, limit=None), "direct")
    if method == "transform":
        return TripleCountResult(int(N), int(r_omega_transform(values, N)[int(N)]), "transform")
    raise InvalidArgument(f"unknown method {method!r}")
