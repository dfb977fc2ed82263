"""Exponential sums sum_{n <= X} f(n) e(alpha n) and trigonometric quadrature.

Value arrays follow the package convention ``values[n] = f(n)`` with
``values[0] = 0``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._backend import kernels
from ._fallback import sincos_turns
from .errors import InvalidArgument, OutOfRange
from .ntcore import FactorTable


def _as_values(values) -> np.ndarray:
    return np.ascontiguousarray(values, dtype=np.float64)


def _check_X(values: np.ndarray, X: int) -> int:
    X = int(X)
    if X < 0 or X > values.shape[0] - 1:
        raise OutOfRange(f"X={X} outside [0, {values.shape[0] - 1}]")
    return X


def exp_sum(values, alpha: float, X: int) -> complex:
    """S(alpha; X) with compensated accumulation.

    Phases come from e(alpha n) = e(alpha n0) e(alpha j), the block phase
    e(alpha n0) being recomputed from an exact product every 64 terms.
    """
    v = _as_values(values)
    X = _check_X(v, X)
    if X == 0:
        return 0j
    return complex(kernels.exp_sum(v, float(alpha), X))


def exp_sum_many(values, alphas, X: int, threads: int = 1) -> np.ndarray:
    """exp_sum at each alpha. Output is independent of ``threads``."""
    v = _as_values(values)
    X = _check_X(v, X)
    alphas = np.ascontiguousarray(alphas, dtype=np.float64)
    if X == 0 or alphas.size == 0:
        return np.zeros(alphas.size, dtype=np.complex128)
    threads = max(1, int(threads))
    if threads == 1 or alphas.size < 2 * threads:
        return kernels.exp_sum_many(v, alphas, X)
    chunks = np.array_split(alphas, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: kernels.exp_sum_many(v, np.ascontiguousarray(c), X), chunks))
    return np.concatenate(parts)


def residue_sums(values, q: int, X: int) -> np.ndarray:
    """R[r] = sum of values[n] over 1 <= n <= X with n = r (mod q), r = 0..q-1."""
    v = _as_values(values)
    X = _check_X(v, X)
    n = np.arange(1, X + 1)
    return np.bincount(n % q, weights=v[1 : X + 1], minlength=q)


def exp_sum_rational(values, a: int, q: int, X: int) -> complex:
    """S(a/q; X) through residue classes mod q; phases are exact roots of unity."""
    if q < 1:
        raise InvalidArgument("q must be >= 1")
    R = residue_sums(values, q, X)
    r = np.arange(q, dtype=np.int64)
    c, s = sincos_turns(((r * a) % q) / q)
    return complex(math.fsum(R * c), math.fsum(R * s))


def default_grid_size(N: int) -> int:
    """Smallest power of two >= 3N + 4."""
    return 1 << max(0, (3 * int(N) + 3).bit_length())


def exp_sum_grid(values, K: int) -> np.ndarray:
    """F(j/K) for j = 0..K-1 by a length-K DFT of the zero-padded table."""
    v = _as_values(values)
    K = int(K)
    if K < v.shape[0]:
        raise InvalidArgument(f"grid size K={K} below table length {v.shape[0]} (aliasing)")
    return np.fft.ifft(v, n=K) * K


def u_sum(beta: float, N: int) -> complex:
    """u(beta) = sum_{n=1}^N e(n beta) in closed form."""
    N = int(N)
    if N < 1:
        raise InvalidArgument("N must be >= 1")
    b = beta - math.floor(beta + 0.5)  # same e(beta), |b| <= 1/2
    if b == 0.0:
        return complex(N)
    ratio = math.sin(math.pi * N * b) / math.sin(math.pi * b)
    c, s = sincos_turns(np.array([(0.5 * (N + 1) * b) % 1.0]))
    return complex(ratio * c[0], ratio * s[0])


def u_sum_array(beta: np.ndarray, N: int) -> np.ndarray:
    """Vectorized u_sum."""
    beta = np.asarray(beta, dtype=np.float64)
    b = beta - np.floor(beta + 0.5)
    out = np.full(b.shape, complex(N), dtype=np.complex128)
    nz = b != 0.0
    bb = b[nz]
    ratio = np.sin(np.pi * N * bb) / np.sin(np.pi * bb)
    c, s = sincos_turns(np.mod(0.5 * (N + 1) * bb, 1.0))
    out[nz] = ratio * (c + 1j * s)
    return out


def prime_exp_sum(t: FactorTable, alpha: float, X: int) -> complex:
    """sum over primes p <= X of e(alpha p)."""
    X = int(X)
    if X < 0 or X > t.limit:
        raise OutOfRange(f"X={X} outside [0, {t.limit}]")
    v = np.zeros(X + 1, dtype=np.float64)
    v[t.primes[: np.searchsorted(t.primes, X, side="right")]] = 1.0
    return exp_sum(v, alpha, X)


def power_integral(values, N: int, k: int, K: int | None = None) -> complex:
    """Exact quadrature of F_N on K equispaced nodes.

    k=3: (1/K) sum_j F(j/K)**3 e(-N j/K), which is the number of weighted
    representations of N as a sum of three terms; k=2: (1/K) sum_j |F(j/K)|**2.
    Exact once K >= k N + 1 because the integrand is then a trigonometric
    polynomial of degree below K.
    """
    N = int(N)
    if k not in (2, 3):
        raise InvalidArgument("k must be 2 or 3")
    v = _as_values(values)
    _check_X(v, N)
    if K is None:
        K = default_grid_size(N)
    K = int(K)
    if K < k * N + 1:
        raise InvalidArgument(f"K={K} below exactness threshold {k * N + 1}")
    F = exp_sum_grid(v[: N + 1], K)
    if k == 2:
        return complex(math.fsum(F.real**2 + F.imag**2) / K)
    j = np.arange(K, dtype=np.int64)
    c, s = sincos_turns(((-N * j) % K) / K)
    G = F**3 * (c + 1j * s)
    return complex(math.fsum(G.real) / K, math.fsum(G.imag) / K)
