"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--scale 1.0]

Both backends are checked for agreement on every input before timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from omegacircle import _fallback

try:
    from omegacircle import _core
except ImportError:
    _core = None


def best_of(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(scale: float):
    n_sieve = int(10**7 * scale)
    spf, _ = _fallback.linear_sieve(n_sieve)
    inc = np.ones(n_sieve + 1)
    inc[:2] = 0
    omega = inc.copy()
    _fallback.accumulate_additive(spf, omega)
    v = omega[: int(10**5 * scale) + 1].copy()
    alphas = np.random.default_rng(0).random(64)
    vi = omega[: 4001].astype(np.int64)
    L = 1 << 20
    a = np.random.default_rng(1).integers(0, 2013265921, L, dtype=np.int64).astype(np.uint64)

    def acc(k):
        f = inc.copy()
        k.accumulate_additive(spf, f)
        return f

    def ntt(k):
        b = a.copy()
        k.ntt(b, 2013265921, 31, False)
        return b

    yield "linear_sieve", f"limit={n_sieve}", lambda k: k.linear_sieve(n_sieve)[0]
    yield "spf_exponents", f"limit={n_sieve}", lambda k: k.spf_exponents(spf)
    yield "accumulate_additive", f"limit={n_sieve}", acc
    yield "exp_sum_many", f"X={v.size - 1} alphas=64", lambda k: k.exp_sum_many(v, alphas, v.size - 1)
    yield "triple_direct", "N=4000", lambda k: k.triple_direct(vi, 4000)
    yield "ntt", f"length={L}", ntt


def agree(x, y) -> bool:
    if isinstance(x, np.ndarray) and x.dtype.kind == "c":
        return bool(np.allclose(x, y, rtol=1e-12, atol=1e-9))
    return bool(np.array_equal(x, y))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    if _core is None:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'kernel':<22}{'size':<26}{'numpy s':>10}{'cython s':>10}{'speedup':>9}  agree")
    for name, size, fn in cases(args.scale):
        t_np = best_of(lambda: fn(_fallback))
        if _core is None:
            print(f"{name:<22}{size:<26}{t_np:>10.4f}")
            continue
        t_cy = best_of(lambda: fn(_core))
        ok = agree(fn(_fallback), fn(_core))
        print(f"{name:<22}{size:<26}{t_np:>10.4f}{t_cy:>10.4f}{t_np / t_cy:>9.1f}  {ok}")


if __name__ == "__main__":
    main()
