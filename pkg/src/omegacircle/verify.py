"""Invariant suite behind ``omegacircle verify``.

Each check compares two independent routes to the same quantity. Details are
deterministic strings so repeated runs produce identical reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .additive import OMEGA, integer_table, value_table
from .bounds import refined_bound, simple_bound
from .circle import major_arc_integral, minor_arc_integral, u_cube_integral
from .convolve import r_omega_direct, r_omega_transform
from .diophantine import ArcSystem, dirichlet_approx, farey_count
from .expsum import exp_sum, exp_sum_many, exp_sum_rational, power_integral
from .ntcore import build_factor_table, gcd_class_exp_sum, mobius, ramanujan_sum, totient


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _e(x: float) -> str:
    return "%.3e" % x


def run_checks(quick: bool = True, threads: int = 1, seed: int = 12345) -> list[CheckResult]:
    nmax = 400 if quick else 2000
    qmax = 60 if quick else 200
    t = build_factor_table(max(10**4, nmax))
    v = integer_table(value_table(OMEGA, t, 10**4))
    vf = v.astype(np.float64)
    rng = np.random.default_rng(seed)
    out = []

    r = r_omega_transform(v, nmax)
    bad = [N for N in range(nmax + 1) if r_omega_direct(v, N) != r[N]]
    out.append(CheckResult("transform_vs_direct", not bad, f"N<={nmax} mismatches={len(bad)}"))

    Ns = sorted(set(int(x) for x in np.linspace(3, min(nmax, 500), 25)))
    err = max(abs(power_integral(vf, N, 3) - r[N]) for N in Ns)
    out.append(CheckResult("orthogonality_k3", err <= 1e-6, f"max_abs_err={_e(err)}"))

    rel = 0.0
    for N in (100, 1000, 10**4):
        exact = int(np.sum(v[: N + 1] ** 2))
        rel = max(rel, abs(power_integral(vf, N, 2).real - exact) / exact)
    out.append(CheckResult("parseval", rel <= 1e-6, f"max_rel_err={_e(rel)}"))

    err = 0.0
    for q in range(1, qmax + 1):
        for n in range(1, qmax + 1):
            err = max(err, abs(ramanujan_sum(t, q, n) - ramanujan_sum(t, q, n, "exponential")))
    out.append(CheckResult("ramanujan_duality", err <= 1e-9, f"q,n<={qmax} max_err={_e(err)}"))

    err = 0.0
    for q in range(1, qmax // 2 + 1):
        for g in (d for d in range(1, q + 1) if q % d == 0):
            for a in range(1, q + 1):
                if math.gcd(a, q) == 1:
                    err = max(err, abs(gcd_class_exp_sum(q, g, a) - mobius(t, q // g)))
    out.append(CheckResult("gcd_class_identity", err <= 1e-9, f"q<={qmax // 2} max_err={_e(err)}"))

    count = 2000 if quick else 10**5
    viol = 0
    for Q in (10, 100, 1000):
        for alpha in rng.random(count):
            ap = dirichlet_approx(float(alpha), Q)
            q = ap.rational.q
            if not (q <= Q and ap.gap < 1.0 / (q * Q)):
                viol += 1
    out.append(CheckResult("dirichlet_contract", viol == 0, f"samples={3 * count} violations={viol}"))

    viol = 0
    for _ in range(1000):
        x, y, g = float(rng.uniform(1, 1e8)), float(rng.uniform(1, 1e6)), float(rng.uniform(0.01, 0.49))
        q = int(rng.integers(1, 10**4))
        a = int(rng.integers(0, q))
        if math.gcd(a, q) != 1:
            a = 1 if q > 1 else 0
        if refined_bound(x, y, g, Fraction(a, q), a, q) != simple_bound(x, y, g, q):
            viol += 1
    out.append(CheckResult("refined_at_rational", viol == 0, f"tuples=1000 mismatches={viol}"))

    bad = [Q for Q in range(1, 60) if farey_count(Q) != 1 + sum(totient(t, q) for q in range(1, Q + 1))]
    out.append(CheckResult("farey_count", not bad, f"Q<60 mismatches={len(bad)}"))

    alphas = rng.random(16)
    many = exp_sum_many(vf, alphas, 5000, threads=threads)
    one = np.array([exp_sum(vf, a, 5000) for a in alphas])
    same = bool(np.array_equal(many, one))
    err = max(abs(exp_sum(vf, a / q, 5000) - exp_sum_rational(vf, a, q, 5000)) for q in (3, 7, 12) for a in (1, q - 1))
    out.append(CheckResult("expsum_routes", same and err <= 1e-8, f"threaded_equal={same} rational_err={_e(err)}"))

    err = abs(u_cube_integral(1000, 1000) - 999 * 998 / 2) / (999 * 998 / 2)
    out.append(CheckResult("u_cube_full_circle", err <= 1e-3, f"N=1000 rel_err={_e(err)}"))

    N = 300 if quick else 2000
    system = ArcSystem(N, 0.8 if quick else 1.0)
    total = major_arc_integral(vf, system, threads=threads).total + minor_arc_integral(vf, system, threads=threads)
    exact = r[N] if N <= nmax else r_omega_direct(v, N)
    err = abs(total - exact) / exact
    out.append(CheckResult("arc_decomposition", err <= 1e-8, f"N={N} rel_err={_e(err)}"))
    return out
