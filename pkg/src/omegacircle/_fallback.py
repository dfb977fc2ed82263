"""Pure-numpy implementations of the compiled kernels in ``_core.pyx``.

Same signatures, same results. Used when the extension is not built or when
``OMEGACIRCLE_PURE=1`` is set.
"""
from __future__ import annotations

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1
_CHUNK = 1 << 16


def linear_sieve(limit: int) -> tuple[np.ndarray, np.ndarray]:
    # Eratosthenes over primes <= sqrt(limit), marking only unmarked entries,
    # gives the same smallest-prime-factor table as the linear sieve.
    spf = np.zeros(max(limit, 0) + 1, dtype=np.uint32)
    if limit >= 1:
        spf[1] = 1
    if limit < 2:
        return spf, np.zeros(0, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    primes = np.flatnonzero(spf[2:] == np.arange(2, limit + 1, dtype=np.uint32)) + 2
    return spf, primes.astype(np.uint32)


def spf_exponents(spf: np.ndarray) -> np.ndarray:
    size = spf.shape[0]
    e = np.zeros(size, dtype=np.uint8)
    if size <= 2:
        return e
    e[2:] = 1
    limit = size - 1
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] != p:
            continue
        pk = p * p
        while pk <= limit:
            block = e[pk::pk]
            block += (spf[pk::pk] == p)
            pk *= p
    return e


def accumulate_additive(spf: np.ndarray, f: np.ndarray) -> None:
    size = f.shape[0]
    if size <= 1:
        return
    f[1] = 0.0
    delta = f.copy()
    n = np.arange(size, dtype=np.int64)
    ptr = n // np.maximum(spf.astype(np.int64), 1)
    ptr[:2] = 0
    active = np.flatnonzero(ptr > 1)
    ptr = ptr[active]
    # pointer jumping along n -> n / spf(n); at most Omega(n) rounds
    while active.size:
        f[active] += delta[ptr]
        ptr = ptr // spf[ptr].astype(np.int64)
        keep = ptr > 1
        active = active[keep]
        ptr = ptr[keep]


def _two_product_frac(a: float, n: np.ndarray) -> np.ndarray:
    """frac(a * n) using Dekker's exact product (Veltkamp split)."""
    n = n.astype(np.float64)
    hi = a * n
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    cn = _SPLITTER * n
    nh = cn - (cn - n)
    nl = n - nh
    lo = ((ah * nh - hi) + ah * nl + al * nh) + al * nl
    r = (hi - np.floor(hi)) + lo
    return r - np.floor(r)


def sincos_turns(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of 2*pi*t with exact values at quarter turns."""
    t = np.asarray(t, dtype=np.float64)
    k = np.floor(4.0 * t + 0.5)
    r = 2.0 * math.pi * (t - 0.25 * k)
    cr, sr = np.cos(r), np.sin(r)
    q = k.astype(np.int64) & 3
    c = np.choose(q, [cr, -sr, -cr, sr])
    s = np.choose(q, [sr, cr, -sr, -cr])
    return c, s


def _exp_sum_parts(v: np.ndarray, alpha: float, X: int) -> tuple[list[float], list[float]]:
    re_parts: list[float] = []
    im_parts: list[float] = []
    for start in range(1, X + 1, _CHUNK):
        stop = min(start + _CHUNK, X + 1)
        w = v[start:stop]
        nz = np.flatnonzero(w)
        if nz.size == 0:
            continue
        t = _two_product_frac(alpha, (nz + start).astype(np.float64))
        c, s = sincos_turns(t)
        re_parts.append(math.fsum(w[nz] * c))
        im_parts.append(math.fsum(w[nz] * s))
    return re_parts, im_parts


def exp_sum(v: np.ndarray, alpha: float, X: int) -> complex:
    re_parts, im_parts = _exp_sum_parts(v, float(alpha), int(X))
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def exp_sum_many(v: np.ndarray, alphas: np.ndarray, X: int) -> np.ndarray:
    return np.array([exp_sum(v, float(a), X) for a in alphas], dtype=np.complex128)


def pair_counts(f: np.ndarray, mmax: int, scatter: bool = False) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    top = f.shape[0] - 1
    c2 = np.zeros(mmax + 1, dtype=np.int64)
    if scatter:
        for i in range(1, min(top, mmax - 1) + 1):
            fi = int(f[i])
            if fi == 0:
                continue
            hi = min(top, mmax - i)
            c2[i + 1 : i + hi + 1] += fi * f[1 : hi + 1]
    else:
        rev = f[::-1].copy()
        for m in range(2, mmax + 1):
            lo, hi = max(1, m - top), min(m - 1, top)
            if lo <= hi:
                c2[m] = int(np.dot(f[lo : hi + 1], rev[top - m + lo : top - m + hi + 1]))
    return c2


def triple_direct(f: np.ndarray, N: int, scatter: bool = False) -> int:
    if N < 3:
        return 0
    f = np.asarray(f, dtype=np.int64)
    c2 = pair_counts(f[:N], N - 1, scatter)
    k = np.arange(1, N - 1)
    return int(np.dot(f[k], c2[N - k]))


def _bit_reverse_permutation(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _powers(base: int, count: int, p: int) -> np.ndarray:
    w = np.ones(count, dtype=np.uint64)
    filled = 1
    while filled < count:
        step = min(filled, count - filled)
        w[filled : filled + step] = w[:step] * np.uint64(pow(base, filled, p)) % np.uint64(p)
        filled += step
    return w


def ntt(a: np.ndarray, p: int, g: int, invert: bool = False) -> None:
    n = a.shape[0]
    p64 = np.uint64(p)
    work = a[_bit_reverse_permutation(n)]
    length = 2
    while length <= n:
        wl = pow(g, (p - 1) // length, p)
        if invert:
            wl = pow(wl, p - 2, p)
        half = length // 2
        w = _powers(wl, half, p)
        blocks = work.reshape(n // length, length)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * w % p64
        blocks[:, :half] = (u + v) % p64
        blocks[:, half:] = (u + p64 - v) % p64
        length *= 2
    if invert:
        work = work * np.uint64(pow(n, p - 2, p)) % p64
    a[:] = work


def pointwise_cube_mod(a: np.ndarray, p: int) -> None:
    p64 = np.uint64(p)
    a[:] = (a * a % p64) * a % p64
