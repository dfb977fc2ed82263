"""Measurements behind the golden baselines; shared by the tests and golden/make_golden.py."""
from __future__ import annotations

import math

import numpy as np

from omegacircle.additive import OMEGA, cap_F
from omegacircle.bounds import BoundSpec, alpha_grid, ratio_scan
from omegacircle.circle import (
    OmegaPrefix,
    default_xgrid,
    fit_coeffs,
    local_errors,
    predict_r,
    singular_series,
    squarefree_upto,
    tail_estimate,
    u_cube_integral,
)
from omegacircle.convolve import r_omega_transform
from omegacircle.ntcore import build_factor_table

LOCAL_XS = (10**4, 10**5, 10**6, 10**7)
LOCAL_QMAX = 20
SERIES_N = 10**6
TREND_NS = (10**3, 10**4, 10**5, 10**6)
SCAN_XS = (10**4, 10**6)
SCAN_SEED = 20240
SCAN_RANDOM = 1000


def setup(limit: int = 10**7):
    t = build_factor_table(limit)
    prefix = OmegaPrefix(t)
    coeffs = fit_coeffs(t, squarefree_upto(t, 200), 1, default_xgrid(), prefix=prefix)
    return t, prefix, coeffs


def local_accuracy(t, prefix, coeffs) -> dict:
    errs = local_errors(t, prefix.values, LOCAL_QMAX, LOCAL_XS, 1, coeffs)
    cells = sorted({(a, q) for a, q, _ in errs})
    lo, hi = LOCAL_XS[0], LOCAL_XS[-1]
    decreasing = sum(errs[(a, q, hi)] < errs[(a, q, lo)] for a, q in cells)
    return {
        "cells": [[a, q] + [errs[(a, q, x)] for x in LOCAL_XS] for a, q in cells],
        "xs": list(LOCAL_XS),
        "decreasing": decreasing,
        "fraction_decreasing": decreasing / len(cells),
        "max_error": max(errs.values()),
    }


def series_truncation(t, coeffs) -> dict:
    s = singular_series(t, SERIES_N, 1, 200, coeffs)
    p50, p100, p200 = s.partial_at(50), s.partial_at(100), s.partial_at(200)
    return {
        "N": SERIES_N,
        "partials": {"50": p50, "100": p100, "200": p200},
        # constant measured on the Q = 50 -> 100 step, tested on 100 -> 200
        "C_step": abs(p100 - p50) / tail_estimate(SERIES_N, 1, 50),
        "step_ratio_100_200": abs(p200 - p100) / tail_estimate(SERIES_N, 1, 100),
        "decay_constant_q1.8": s.decay_constant(1.8),
        "decay_constant_q1.8_q_ge_2": float(np.max(np.abs(s.terms[1:]) * np.arange(2, 201) ** 1.8)),
    }


def main_term_trend(t, prefix, coeffs) -> dict:
    r = r_omega_transform(prefix.values[: TREND_NS[-1] + 1], TREND_NS[-1])
    out = []
    for N in TREND_NS:
        pred = predict_r(t, N, 1, 200, coeffs)
        out.append({"N": N, "r": int(r[N]), "predicted": pred, "ratio": int(r[N]) / pred})
    return {"rows": out}


def u_window() -> dict:
    rows = []
    for N in (10**3, 10**4):
        Q = math.log(N) ** 2
        I = u_cube_integral(N, Q)
        rows.append({"N": N, "Q": Q, "integral": I.real, "scaled_deficit": (I.real - N * N / 2) * Q * Q / N**2})
    full = u_cube_integral(1000, 1e9).real
    exact = 999 * 998 / 2
    return {
        "rows": rows,
        "bound": max(abs(r["scaled_deficit"]) for r in rows),
        "full_circle_N1000": full,
        "full_circle_rel_err": abs(full - exact) / exact,
    }


def bound_scan(t, prefix) -> dict:
    alphas = np.unique(np.concatenate([alpha_grid("farey", Q=50), alpha_grid("random", n=SCAN_RANDOM, seed=SCAN_SEED)]))
    v = prefix.values[: SCAN_XS[-1] + 1].astype(np.float64)
    recs = ratio_scan(v, lambda X: cap_F(OMEGA, t, X), SCAN_XS, alphas, BoundSpec("main_F0", 0.25))
    out = {}
    for X in SCAN_XS:
        best = max((r for r in recs if r.X == X), key=lambda r: r.ratio)
        out[str(X)] = {"max_ratio": best.ratio, "alpha": best.alpha, "a": best.a, "q": best.q}
    return {"seed": SCAN_SEED, "alphas": int(alphas.size), "per_X": out}
