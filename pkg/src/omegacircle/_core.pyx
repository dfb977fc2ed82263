# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.

Every function here has a numpy twin in :mod:`omegacircle._fallback` with the
same signature and the same results (bit-identical for the integer kernels,
agreeing to a few ulp for the floating ones).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fma, floor, sin, cos, log, M_PI, fabs
from libc.stdint cimport uint8_t, uint32_t, int64_t, uint64_t

cnp.import_array()

cdef enum:
    PHASE_BLOCK = 64


def linear_sieve(Py_ssize_t limit):
    """Smallest-prime-factor table by the linear (Euler) sieve.

    Returns ``(spf, primes)``; ``spf[0] = 0``, ``spf[1] = 1``.
    """
    cdef Py_ssize_t cap
    if limit < 2:
        spf_arr = np.zeros(max(limit, 0) + 1, dtype=np.uint32)
        if limit >= 1:
            spf_arr[1] = 1
        return spf_arr, np.zeros(0, dtype=np.uint32)
    # Rosser-Schoenfeld: pi(x) < 1.25506 x / log x for x > 1
    cap = <Py_ssize_t>(1.25506 * limit / log(<double>limit)) + 16
    spf_arr = np.zeros(limit + 1, dtype=np.uint32)
    primes_arr = np.empty(cap, dtype=np.uint32)
    cdef uint32_t[::1] spf = spf_arr
    cdef uint32_t[::1] primes = primes_arr
    cdef Py_ssize_t i, j, count = 0
    cdef uint32_t p, s
    cdef uint64_t lim = <uint64_t>limit
    spf[1] = 1
    with nogil:
        for i in range(2, limit + 1):
            if spf[i] == 0:
                spf[i] = <uint32_t>i
                primes[count] = <uint32_t>i
                count += 1
            s = spf[i]
            for j in range(count):
                p = primes[j]
                if p > s or <uint64_t>p * <uint64_t>i > lim:
                    break
                spf[p * i] = p
    return spf_arr, primes_arr[:count].copy()


def spf_exponents(const uint32_t[::1] spf):
    """Exponent of the smallest prime factor of every n (0 at n <= 1)."""
    cdef Py_ssize_t n, m, size = spf.shape[0]
    out_arr = np.zeros(size, dtype=np.uint8)
    cdef uint8_t[::1] e = out_arr
    cdef uint32_t p
    with nogil:
        for n in range(2, size):
            p = spf[n]
            m = n // p
            if m > 1 and spf[m] == p:
                e[n] = e[m] + 1
            else:
                e[n] = 1
    return out_arr


def accumulate_additive(const uint32_t[::1] spf, double[::1] f):
    """In place: f[n] <- f[n] + f[n / spf(n)] for n = 2, 3, ...

    With f holding the increment rule(p, e) - rule(p, e - 1) for the leading
    prime power, this turns it into the full additive function.
    """
    cdef Py_ssize_t n, size = f.shape[0]
    if size > 1:
        f[1] = 0.0
    with nogil:
        for n in range(2, size):
            f[n] += f[n // spf[n]]


cdef inline double _frac_mul(double a, double n) noexcept nogil:
    # fractional part of a*n using the exact product error from fma
    cdef double hi = a * n
    cdef double lo = fma(a, n, -hi)
    cdef double r = (hi - floor(hi)) + lo
    return r - floor(r)


cdef inline void _sincos_turns(double t, double *c, double *s) noexcept nogil:
    # cos/sin of 2*pi*t, reduced to an eighth of a turn then rotated exactly
    cdef double k = floor(4.0 * t + 0.5)
    cdef double r = 2.0 * M_PI * (t - 0.25 * k)
    cdef double cr = cos(r), sr = sin(r)
    cdef int q = (<int>k) & 3
    if q == 0:
        c[0] = cr; s[0] = sr
    elif q == 1:
        c[0] = -sr; s[0] = cr
    elif q == 2:
        c[0] = -cr; s[0] = -sr
    else:
        c[0] = sr; s[0] = -cr


cdef inline void _neumaier(double *s, double *c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef void _exp_sum(const double[::1] v, double alpha, Py_ssize_t X,
                   double *out_re, double *out_im) noexcept nogil:
    cdef double tc[PHASE_BLOCK]
    cdef double ts[PHASE_BLOCK]
    cdef double c0, s0, c, s, w
    cdef double sre = 0.0, cre = 0.0, sim = 0.0, cim = 0.0
    cdef Py_ssize_t n0, j, jmax
    for j in range(PHASE_BLOCK):
        _sincos_turns(_frac_mul(alpha, <double>j), &tc[j], &ts[j])
    n0 = 1
    while n0 <= X:
        _sincos_turns(_frac_mul(alpha, <double>n0), &c0, &s0)
        jmax = X - n0 + 1
        if jmax > PHASE_BLOCK:
            jmax = PHASE_BLOCK
        for j in range(jmax):
            w = v[n0 + j]
            if w != 0.0:
                c = c0 * tc[j] - s0 * ts[j]
                s = c0 * ts[j] + s0 * tc[j]
                _neumaier(&sre, &cre, w * c)
                _neumaier(&sim, &cim, w * s)
        n0 += PHASE_BLOCK
    out_re[0] = sre + cre
    out_im[0] = sim + cim


def exp_sum(const double[::1] v, double alpha, Py_ssize_t X):
    """sum_{1 <= n <= X} v[n] e(alpha n)."""
    cdef double re = 0.0, im = 0.0
    with nogil:
        _exp_sum(v, alpha, X, &re, &im)
    return complex(re, im)


def exp_sum_many(const double[::1] v, const double[::1] alphas, Py_ssize_t X):
    """exp_sum at every alpha; releases the GIL for the whole batch."""
    cdef Py_ssize_t k, m = alphas.shape[0]
    out_arr = np.empty(m, dtype=np.complex128)
    cdef double[::1] buf = out_arr.view(np.float64)
    cdef double re, im
    with nogil:
        for k in range(m):
            _exp_sum(v, alphas[k], X, &re, &im)
            buf[2 * k] = re
            buf[2 * k + 1] = im
    return out_arr


def pair_counts(const int64_t[::1] f, Py_ssize_t mmax, bint scatter=False):
    """c2[m] = sum_{i + j = m, i, j >= 1} f[i] f[j] for 0 <= m <= mmax.

    ``scatter`` switches from the per-m gather loop to the (i, j) scatter
    loop; both orders are exact and must agree.
    """
    out_arr = np.zeros(mmax + 1, dtype=np.int64)
    cdef int64_t[::1] c2 = out_arr
    cdef Py_ssize_t m, i, j, top = f.shape[0] - 1
    cdef int64_t s, fi
    with nogil:
        if scatter:
            for i in range(1, min(top, mmax - 1) + 1):
                fi = f[i]
                if fi == 0:
                    continue
                for j in range(1, min(top, mmax - i) + 1):
                    c2[i + j] += fi * f[j]
        else:
            for m in range(2, mmax + 1):
                s = 0
                for i in range(max(1, m - top), min(m - 1, top) + 1):
                    s += f[i] * f[m - i]
                c2[m] = s
    return out_arr


def triple_direct(const int64_t[::1] f, Py_ssize_t N, bint scatter=False):
    """sum_{n1 + n2 + n3 = N, ni >= 1} f[n1] f[n2] f[n3] by two-stage convolution."""
    if N < 3:
        return 0
    c2_arr = pair_counts(f[:N], N - 1, scatter)
    cdef int64_t[::1] c2 = c2_arr
    cdef Py_ssize_t k
    cdef int64_t r = 0
    with nogil:
        for k in range(1, N - 1):
            r += f[k] * c2[N - k]
    return int(r)


cdef inline uint64_t _powmod(uint64_t b, uint64_t e, uint64_t p) noexcept nogil:
    cdef uint64_t r = 1
    b %= p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


def ntt(uint64_t[::1] a, uint64_t p, uint64_t g, bint invert=False):
    """In-place iterative radix-2 number-theoretic transform modulo a prime p < 2**31.

    The inverse includes the 1/n scaling.
    """
    cdef Py_ssize_t n = a.shape[0], i, j, bit, length, half, k
    cdef uint64_t w, wl, u, v, tmp, ninv
    with nogil:
        j = 0
        for i in range(1, n):
            bit = n >> 1
            while j & bit:
                j ^= bit
                bit >>= 1
            j ^= bit
            if i < j:
                tmp = a[i]
                a[i] = a[j]
                a[j] = tmp
        length = 2
        while length <= n:
            wl = _powmod(g, (p - 1) // <uint64_t>length, p)
            if invert:
                wl = _powmod(wl, p - 2, p)
            half = length >> 1
            i = 0
            while i < n:
                w = 1
                for k in range(half):
                    u = a[i + k]
                    v = a[i + k + half] * w % p
                    a[i + k] = u + v if u + v < p else u + v - p
                    a[i + k + half] = u - v if u >= v else u + p - v
                    w = w * wl % p
                i += length
            length <<= 1
        if invert:
            ninv = _powmod(<uint64_t>n, p - 2, p)
            for i in range(n):
                a[i] = a[i] * ninv % p


def pointwise_cube_mod(uint64_t[::1] a, uint64_t p):
    cdef Py_ssize_t i, n = a.shape[0]
    with nogil:
        for i in range(n):
            a[i] = (a[i] * a[i] % p) * a[i] % p
