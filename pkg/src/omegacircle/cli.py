"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 precision failure. Every output starts with ``#`` lines carrying the
package version, seed and a hash of the configuration; thread count and
output path are excluded from the hash because they do not change results.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from collections.abc import Callable, Iterable

import numpy as np

from . import __version__
from .errors import FitError, InvalidArgument, PrecisionError

THREADS_ENV = "OMEGACIRCLE_THREADS"
EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_PRECISION = 0, 1, 2, 3
_NOT_HASHED = {"threads", "output", "func"}


class VerificationFailure(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def config_hash(args: argparse.Namespace) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_HASHED}
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def provenance(args: argparse.Namespace) -> dict:
    return {
        "version": __version__,
        "command": args.command,
        "seed": getattr(args, "seed", None),
        "config_hash": config_hash(args),
    }


class Output:
    """Collects the output text so nothing is written on failure."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.buf = io.StringIO()

    def comments(self, extra: Iterable[str] = ()) -> None:
        meta = provenance(self.args)
        self.buf.write(f"# omegacircle {meta['version']}\n")
        self.buf.write(f"# command: {meta['command']}\n")
        self.buf.write(f"# seed: {meta['seed'] if meta['seed'] is not None else 'none'}\n")
        self.buf.write(f"# config: {meta['config_hash']}\n")
        for line in extra:
            self.buf.write(f"# {line}\n")

    def table(self, header: list[str], rows: Iterable[Iterable], extra: Iterable[str] = ()) -> None:
        self.comments(extra)
        w = csv.writer(self.buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])

    def json(self, doc: dict) -> None:
        doc = {"meta": provenance(self.args), **doc}
        self.buf.write(json.dumps(doc, indent=1, sort_keys=False) + "\n")

    def flush(self) -> None:
        text = self.buf.getvalue()
        if self.args.output in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(self.args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgument(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise InvalidArgument(f"{THREADS_ENV} must be >= 1")
    return n


def _int(text: str) -> int:
    # accepts 10000, 1e4, 10**4
    try:
        if "**" in text:
            b, e = text.split("**")
            return int(b) ** int(e)
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


# ---------------------------------------------------------------- shared helpers


def _table(limit: int):
    from .ntcore import build_factor_table

    return build_factor_table(max(2, int(limit)))


def _coeffs(args, t_needed: int, qmax: int, M: int):
    """Load a coefficient table or fit one on the default grid."""
    from .circle import CoeffTable, OmegaPrefix, default_xgrid, fit_coeffs, squarefree_upto

    if args.coeffs:
        with open(args.coeffs, encoding="utf-8") as fh:
            return CoeffTable.from_json(fh.read()), None
    xgrid = default_xgrid(args.fit_xmin, args.fit_xmax)
    t = _table(max(t_needed, xgrid[-1]))
    C = fit_coeffs(t, squarefree_upto(t, qmax), M, xgrid, prefix=OmegaPrefix(t, xgrid[-1]))
    return C, t


def _add_coeff_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coeffs", help="coefficient table JSON (from `fit`); fitted on the fly if omitted")
    p.add_argument("--fit-xmin", type=_int, default=10**4)
    p.add_argument("--fit-xmax", type=_int, default=10**7)


# ---------------------------------------------------------------- subcommands


def cmd_sieve(args, out: Output) -> None:
    from .additive import OMEGA, value_table

    t = _table(args.limit)
    v = value_table(OMEGA, t, args.limit)
    rows = [
        ("limit", args.limit),
        ("prime_count", int(t.primes.size)),
        ("largest_prime", int(t.primes[-1]) if t.primes.size else 0),
        ("sum_Omega", int(round(math.fsum(v)))),
        ("max_Omega", int(v.max())),
    ]
    out.table(["key", "value"], rows)


def _function(name: str):
    from .additive import by_name

    return by_name(name)


def cmd_scan(args, out: Output) -> None:
    from .additive import cap_F, value_table
    from .bounds import BoundSpec, alpha_grid, ratio_scan

    f = _function(args.f)
    bound_spec = BoundSpec(args.bound, args.delta, args.upsilon, args.R)
    parts = []
    if args.farey:
        parts.append(alpha_grid("farey", Q=args.farey))
    if args.random:
        if args.seed is None:
            raise InvalidArgument("random alphas need --seed")
        parts.append(alpha_grid("random", n=args.random, seed=args.seed))
    if args.stress:
        parts.append(alpha_grid("convergent-stress", Q=args.stress))
    if not parts:
        raise InvalidArgument("no alphas: give --farey, --random or --stress")
    alphas = np.unique(np.concatenate(parts))
    Xs = sorted(set(args.x))
    if Xs[0] < 3:
        raise InvalidArgument("X must be >= 3")
    t = _table(Xs[-1])
    values = value_table(f, t, Xs[-1])
    recs = ratio_scan(values, lambda X: cap_F(f, t, X), Xs, alphas, bound_spec, threads=args.threads)
    rows = ((r.alpha, r.a, r.q, r.X, r.abs_S, r.bound, r.ratio) for r in recs)
    extra = [f"function: {f.name}", f"bound: {bound_spec.kind} delta={fmt(bound_spec.delta)}", f"alphas: {alphas.size}"]
    out.table(["alpha", "a", "q", "X", "abs_S", "bound", "ratio"], rows, extra)


def cmd_bounds(args, out: Output) -> None:
    from .additive import cap_F
    from .bounds import BoundSpec

    bound_spec = BoundSpec(args.kind, args.delta, args.upsilon, args.R)
    Xs, qs = sorted(set(args.x)), sorted(set(args.q))
    if args.kind == "refined" and args.alpha is None:
        raise InvalidArgument("refined bound needs --alpha")
    if args.Ff is not None:
        Ff_of = lambda X: args.Ff  # noqa: E731
    else:
        if Xs[-1] > 10**8:
            raise InvalidArgument("give --Ff for X above 10^8")
        f = _function(args.f)
        t = _table(Xs[-1])
        Ff_of = lambda X: cap_F(f, t, X)  # noqa: E731
    rows = []
    for X in Xs:
        Ff = Ff_of(X)
        for q in qs:
            a = None if args.alpha is None else int(round(args.alpha * q))
            rows.append((args.kind, X, q, Ff, bound_spec.evaluate(X, q, Ff, args.alpha, a)))
    out.table(["kind", "X", "q", "Ff", "bound"], rows)


def cmd_rq(args, out: Output) -> None:
    from .additive import integer_table, value_table
    from .convolve import r_omega_direct, r_omega_transform

    nmax, nmin = args.nmax, args.nmin
    if nmax < 3 or not 0 <= nmin <= nmax:
        raise InvalidArgument("need nmax >= 3 and 0 <= nmin <= nmax")
    t = _table(nmax)
    v = integer_table(value_table(_function(args.f), t, nmax))
    if args.method == "direct":
        r = {N: r_omega_direct(v, N, limit=None) for N in range(nmin, nmax + 1)}
        method = "direct"
    else:
        arr = r_omega_transform(v, nmax)
        r = {N: int(arr[N]) for N in range(nmin, nmax + 1)}
        method = "transform"
    extra = []
    if args.check_direct and args.method != "direct":
        checked = [N for N in r if N <= args.check_limit]
        if nmax <= 10 * args.check_limit and nmax not in checked:
            checked.append(nmax)
        bad = [N for N in checked if r_omega_direct(v, N, limit=None) != r[N]]
        if bad:
            raise VerificationFailure(f"transform and direct disagree at N={bad[:10]}")
        method = "transform+direct"
        extra.append(f"direct check: {len(checked)} values agree")
    out.table(["N", "r_omega", "method"], ((N, r[N], method) for N in sorted(r)), extra)


def cmd_arcs(args, out: Output) -> None:
    from .additive import OMEGA, value_table
    from .circle import major_arc_integral, minor_arc_integral
    from .convolve import r_omega_direct
    from .diophantine import ArcSystem

    N = args.n
    system = ArcSystem(N, args.B)
    C, t = _coeffs(args, N, system.qmax, args.M)
    t = t or _table(N)
    values = value_table(OMEGA, t, N)
    major = major_arc_integral(values, system, args.M, C, args.K, t=t, threads=args.threads)
    rows = [("major", a.a, a.q, a.lo, a.hi, a.value.real, a.value.imag) for a in major.arcs]
    rows.append(("major_total", "", "", "", "", major.total.real, major.total.imag))
    rows.append(("model_total", "", "", "", "", major.model_total.real, major.model_total.imag))
    extra = [f"N={N} B={fmt(args.B)} Q={fmt(system.Q)}"]
    if not args.no_minor:
        minor = minor_arc_integral(values, system, args.K, threads=args.threads)
        total = major.total + minor
        exact = r_omega_direct(values, N, limit=None)
        rows.append(("minor_total", "", "", "", "", minor.real, minor.imag))
        rows.append(("sum", "", "", "", "", total.real, total.imag))
        rows.append(("exact", "", "", "", "", float(exact), 0.0))
        err = abs(total - exact) / max(1.0, exact)
        extra.append(f"decomposition relative error: {err:.3e}")
        if err > args.tol:
            out.table(["part", "a", "q", "lo", "hi", "re", "im"], rows, extra)
            out.flush()
            raise VerificationFailure(f"major + minor misses r(N) by {err:.3e} relative")
    out.table(["part", "a", "q", "lo", "hi", "re", "im"], rows, extra)


def cmd_sseries(args, out: Output) -> None:
    from .circle import singular_series, tail_estimate

    Ns = sorted(set(args.n))
    C, t = _coeffs(args, Ns[-1], args.Q, args.M)
    t = t or _table(args.Q)
    rows = []
    for N in Ns:
        s = singular_series(t, N, args.M, args.Q, C)
        partial = 0.0
        for q in range(1, args.Q + 1):
            partial = s.partial_at(q)
            rows.append((N, q, s.terms[q - 1], partial, tail_estimate(N, args.M, q), partial * N * N / 2))
    out.table(["N", "q", "term", "partial", "tail_estimate", "predicted_r"], rows)


def cmd_fit(args, out: Output) -> None:
    from .circle import OmegaPrefix, default_xgrid, fit_coeffs, squarefree_upto

    xgrid = default_xgrid(args.xmin, args.xmax, args.per_decade)
    t = _table(xgrid[-1])
    moduli = squarefree_upto(t, args.qmax) if args.moduli is None else args.moduli
    prefix = None if args.h is not None else OmegaPrefix(t, xgrid[-1])
    C = fit_coeffs(t, moduli, args.M, xgrid, h=args.h, prefix=prefix)
    out.json(json.loads(C.to_json()))


def cmd_verify(args, out: Output) -> None:
    from .verify import run_checks

    results = run_checks(quick=not args.full, threads=args.threads, seed=args.seed)
    out.table(["check", "status", "detail"], ((r.name, "pass" if r.ok else "FAIL", r.detail) for r in results))
    failed = [r.name for r in results if not r.ok]
    if failed:
        out.flush()
        raise VerificationFailure(f"failed checks: {', '.join(failed)}")


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="output file (default stdout)")
    common.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")

    p = argparse.ArgumentParser(prog="omegacircle", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"omegacircle {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    sp = add("sieve", cmd_sieve, "build the factor table and print statistics")
    sp.add_argument("--limit", type=_int, required=True)

    sp = add("scan", cmd_scan, "ratio of |S_f(alpha; X)| to a bound over alpha grids")
    sp.add_argument("--f", default="Omega", help="omega, Omega or Omega_k")
    sp.add_argument("--delta", type=float, default=0.25)
    sp.add_argument("--bound", default="main_F0")
    sp.add_argument("--upsilon", type=float, default=1.0)
    sp.add_argument("--R", type=float, default=None)
    sp.add_argument("--farey", type=int, default=0, help="include Farey fractions of this order")
    sp.add_argument("--random", type=int, default=0, help="include this many uniform alphas")
    sp.add_argument("--stress", type=int, default=0, help="include convergents with q up to this")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--x", type=_int, action="append", required=True, help="repeatable")

    sp = add("bounds", cmd_bounds, "evaluate a bound on an (X, q) grid")
    sp.add_argument("--kind", default="main_F0")
    sp.add_argument("--delta", type=float, default=0.25)
    sp.add_argument("--upsilon", type=float, default=1.0)
    sp.add_argument("--R", type=float, default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--f", default="Omega")
    sp.add_argument("--Ff", type=float, default=None, help="F_f(X); computed from --f when omitted")
    sp.add_argument("--x", type=_int, action="append", required=True)
    sp.add_argument("--q", type=_int, action="append", required=True)

    sp = add("rq", cmd_rq, "exact r(N) table")
    sp.add_argument("--nmax", type=_int, required=True)
    sp.add_argument("--f", default="Omega", help="integer-valued additive function")
    sp.add_argument("--nmin", type=_int, default=3)
    sp.add_argument("--method", choices=("transform", "direct"), default="transform")
    sp.add_argument("--check-direct", action="store_true")
    sp.add_argument("--check-limit", type=_int, default=2000)

    sp = add("arcs", cmd_arcs, "major and minor arc integrals with the decomposition check")
    sp.add_argument("--n", type=_int, required=True)
    sp.add_argument("--B", type=float, default=1.0)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--K", type=int, default=256)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--no-minor", action="store_true")
    _add_coeff_args(sp)

    sp = add("sseries", cmd_sseries, "singular series partial sums and tail estimates")
    sp.add_argument("--n", type=_int, action="append", required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--Q", type=_int, default=200)
    _add_coeff_args(sp)

    sp = add("fit", cmd_fit, "fit the local coefficients and write JSON")
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--qmax", type=_int, default=200, help="fit every squarefree modulus up to this")
    sp.add_argument("--moduli", type=_int, nargs="+", default=None)
    sp.add_argument("--xmin", type=_int, default=10**4)
    sp.add_argument("--xmax", type=_int, default=10**7)
    sp.add_argument("--per-decade", type=int, default=10)
    sp.add_argument("--h", type=_int, default=None, help="fit one residue class instead of the coprime average")

    sp = add("verify", cmd_verify, "run the invariant suite")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true", help="small ranges (default)")
    mode.add_argument("--full", action="store_true", help="acceptance-scale ranges")
    sp.add_argument("--seed", type=int, default=12345)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads is None:
            args.threads = default_threads()
        if args.threads < 1:
            raise InvalidArgument("--threads must be >= 1")
        out = Output(args)
        args.func(args, out)
        out.flush()
        return EXIT_OK
    except VerificationFailure as exc:
        print(f"omegacircle: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except PrecisionError as exc:
        print(f"omegacircle: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (InvalidArgument, FitError, OSError) as exc:
        print(f"omegacircle: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
