"""Circle-method pipeline for r(N) = #{weighted n1 + n2 + n3 = N} with weight Omega.

Pieces: exact congruence summatory sums, fitted local coefficients P_{j,g},
the local approximation frak_f(q; x, M), the truncated singular series,
quadrature of u(beta)^3 and of F_N^3 over the arc dissection, and the
main-term prediction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import __version__
from .diophantine import ArcSystem
from .errors import ConfigurationError, FitError, InvalidArgument, OutOfRange
from .expsum import exp_sum_many, residue_sums, u_sum_array
from .ntcore import FactorTable, big_omega, divisors, mobius, ramanujan_sum, totient

ETA = 0.1  # exponent slack in the tail estimate (M loglog N)^3 / Q^(1 - ETA)
MAX_COND = 1e10
GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


# ---------------------------------------------------------------- summatory sums


class OmegaPrefix:
    """Omega table and its prefix sums up to ``t.limit`` (exact int64)."""

    def __init__(self, t: FactorTable, limit: int | None = None):
        from .additive import OMEGA, integer_table, value_table

        self.t = t
        self.limit = t.limit if limit is None else int(limit)
        self.values = integer_table(value_table(OMEGA, t, self.limit))
        self.prefix = np.cumsum(self.values)

    def total(self, x: int) -> int:
        """sum_{n <= x} Omega(n)."""
        x = int(x)
        if x > self.limit:
            raise OutOfRange(f"x={x} exceeds table limit {self.limit}")
        return int(self.prefix[x]) if x >= 1 else 0

    def coprime(self, x: int, g: int) -> int:
        """sum of Omega(n) over n <= x with (n, g) = 1, by inclusion-exclusion.

        sum_{d | g} mu(d) sum_{m <= x/d} Omega(d m), and Omega(d m) = Omega(d) + Omega(m).
        """
        x = int(x)
        s = 0
        for d in divisors(self.t, g):
            mu = mobius(self.t, d)
            if mu:
                s += mu * (big_omega(self.t, d) * (x // d) + self.total(x // d))
        return s


def summatory_omega_ap(t: FactorTable, x: int, q: int, h: int) -> int:
    """sum of Omega(n) over 1 <= n <= x with n = h (mod q), by walking the table."""
    x, q, h = int(x), int(q), int(h)
    if q < 1 or not 1 <= h <= q:
        raise InvalidArgument(f"need q >= 1 and 1 <= h <= q, got q={q}, h={h}")
    if x > t.limit:
        raise OutOfRange(f"x={x} exceeds sieve limit {t.limit}")
    if x < h:
        return 0
    from .additive import OMEGA, integer_table, value_table

    v = integer_table(value_table(OMEGA, t, x))
    return int(v[h::q].sum())


# ---------------------------------------------------------------- coefficients


@dataclass
class CoeffTable:
    """Coefficients of P_{j,g}(y) = b(j,g) y + B(j,g) for 1 <= j <= M.

    ``residuals`` maps g to the least-squares residual norm of its fit.
    """

    M: int
    entries: dict[tuple[int, int], tuple[float, float]]
    provenance: str = "user-supplied"
    residuals: dict[int, float] = field(default_factory=dict)
    xgrid: tuple[int, ...] = ()

    def __post_init__(self):
        if self.M < 1:
            raise InvalidArgument("M must be >= 1")
        if self.provenance not in ("fitted", "user-supplied"):
            raise InvalidArgument(f"unknown provenance {self.provenance!r}")

    @property
    def moduli(self) -> list[int]:
        return sorted({g for _, g in self.entries})

    def get(self, j: int, g: int) -> tuple[float, float]:
        try:
            return self.entries[(j, g)]
        except KeyError:
            raise ConfigurationError(f"no coefficient for (j={j}, g={g})") from None

    def P(self, j: int, g: int, y: float) -> float:
        b, B = self.get(j, g)
        return b * y + B

    def require(self, t: FactorTable, q: int, M: int) -> None:
        """Raise ConfigurationError unless every squarefree g | q is covered up to M."""
        if M > self.M:
            raise ConfigurationError(f"table holds M={self.M} < requested {M}")
        for g in divisors(t, q):
            if mobius(t, g):
                for j in range(1, M + 1):
                    self.get(j, g)

    def to_json(self) -> str:
        doc = {
            "version": __version__,
            "M": self.M,
            "provenance": self.provenance,
            "xgrid": list(self.xgrid),
            "entries": [
                {"j": j, "g": g, "b": b, "B": B, **({"residual": self.residuals[g]} if g in self.residuals else {})}
                for (j, g), (b, B) in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> CoeffTable:
        try:
            doc = json.loads(text)
            entries = {(int(e["j"]), int(e["g"])): (float(e["b"]), float(e["B"])) for e in doc["entries"]}
            residuals = {int(e["g"]): float(e["residual"]) for e in doc["entries"] if "residual" in e}
            return cls(
                int(doc["M"]),
                entries,
                doc.get("provenance", "user-supplied"),
                residuals,
                tuple(int(x) for x in doc.get("xgrid", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed coefficient table: {exc}") from exc


def default_xgrid(lo: float = 1e4, hi: float = 1e7, per_decade: int = 10) -> list[int]:
    n = int(round(math.log10(hi / lo) * per_decade)) + 1
    return sorted({int(round(x)) for x in np.logspace(math.log10(lo), math.log10(hi), n)})


def design_matrix(xs, M: int) -> np.ndarray:
    """Columns loglog x / (log x)^(j-1) and 1 / (log x)^(j-1) for j = 1..M."""
    xs = np.asarray(xs, dtype=np.float64)
    L = np.log(xs)
    ll = np.log(L)
    cols = []
    for j in range(1, M + 1):
        s = L ** -(j - 1)
        cols += [ll * s, s]
    return np.column_stack(cols)


def _lstsq(A: np.ndarray, y: np.ndarray, label: str) -> tuple[np.ndarray, float]:
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > MAX_COND:
        raise FitError(f"{label}: design matrix condition number {cond:.3g} exceeds {MAX_COND:.0e}")
    c, *_ = np.linalg.lstsq(A, y, rcond=None)
    return c, float(np.linalg.norm(A @ c - y))


def fit_from_samples(xs, y, M: int, label: str = "fit") -> tuple[np.ndarray, float]:
    """Least squares of y(x) against design_matrix(xs, M); returns (coeffs, residual norm)."""
    return _lstsq(design_matrix(xs, M), np.asarray(y, dtype=np.float64), label)


def fit_coeffs(
    t: FactorTable,
    moduli,
    M: int,
    xgrid,
    *,
    h: int | None = None,
    prefix: OmegaPrefix | None = None,
) -> CoeffTable:
    """Fit b(j,g), B(j,g) for each modulus g.

    The sample at x is phi(g)/x times the Omega-sum over n <= x in one
    coprime class mod g. By default the class sum is replaced by its average
    over all phi(g) coprime classes (inclusion-exclusion on the prefix
    table), which has the same expansion and less noise; ``h`` picks a
    single class instead.
    """
    M = int(M)
    if M not in (1, 2):
        raise InvalidArgument("M must be 1 or 2")
    xs = sorted({int(x) for x in xgrid})
    if len(xs) < 2 * M + 1 or xs[0] < 3:
        raise FitError(f"need at least {2 * M + 1} grid points >= 3, got {len(xs)}")
    if xs[-1] < 100 * xs[0]:
        raise FitError(f"xgrid spans {xs[0]}..{xs[-1]}, less than two decades")
    if xs[-1] > t.limit:
        raise OutOfRange(f"xgrid reaches {xs[-1]} beyond sieve limit {t.limit}")
    if h is None and prefix is None:
        prefix = OmegaPrefix(t, xs[-1])
    entries, residuals = {}, {}
    values = None if h is None else _omega_values(t, xs[-1])
    for g in sorted({int(g) for g in moduli}):
        if g < 1:
            raise InvalidArgument("moduli must be >= 1")
        phi = totient(t, g)
        if h is None:
            sums = np.array([prefix.coprime(x, g) / phi for x in xs], dtype=np.float64)
        else:
            hg = h % g or g
            if math.gcd(hg, g) != 1:
                raise InvalidArgument(f"residue {h} is not coprime to {g}")
            cls = np.cumsum(values[hg::g])  # partial sums over n = hg, hg + g, ...
            sums = np.array([cls[(x - hg) // g] if x >= hg else 0 for x in xs], dtype=np.float64)
        y = sums * phi / np.asarray(xs, dtype=np.float64)
        c, res = fit_from_samples(xs, y, M, f"modulus {g}")
        for j in range(1, M + 1):
            entries[(j, g)] = (float(c[2 * j - 2]), float(c[2 * j - 1]))
        residuals[g] = res
    return CoeffTable(M, entries, "fitted", residuals, tuple(xs))


def _omega_values(t: FactorTable, x: int) -> np.ndarray:
    from .additive import OMEGA, integer_table, value_table

    return integer_table(value_table(OMEGA, t, x))


def squarefree_upto(t: FactorTable, Q: int) -> list[int]:
    return [g for g in range(1, int(Q) + 1) if mobius(t, g)]


def mertens_constant(t: FactorTable, X: int | None = None) -> float:
    """B_1 + sum_p 1/(p(p-1)), the constant term of sum_{n <= x} Omega(n) / x - loglog x.

    B_1 is estimated by sum_{p <= X} 1/p - loglog X and the tail of the
    second sum beyond X by 1/X.
    """
    X = t.limit if X is None else int(X)
    if X < 3 or X > t.limit:
        raise OutOfRange(f"X={X} outside [3, {t.limit}]")
    p = t.primes[: np.searchsorted(t.primes, X, side="right")].astype(np.float64)
    b1 = math.fsum(1.0 / p) - math.log(math.log(X))
    return b1 + math.fsum(1.0 / (p * (p - 1.0))) + 1.0 / X


# ---------------------------------------------------------------- local approximation


@lru_cache(maxsize=4096)
def _omega_mu(t: FactorTable, q: int) -> int:
    return sum(big_omega(t, d) * mobius(t, q // d) for d in divisors(t, q))


def omega_mu(t: FactorTable, q: int) -> int:
    """(Omega * mu)(q): 1 when q is a prime power, otherwise 0."""
    return _omega_mu(t, int(q))


def frak_f(t: FactorTable, q: int, x: float, M: int, coeffs: CoeffTable) -> float:
    """(x/q) [ (Omega*mu)(q) + sum_{g | q} g mu(g)/phi(g) sum_j P_{j,g}(loglog(xg/q)) / (log(xg/q))^(j-1) ]."""
    q = int(q)
    if q < 1:
        raise InvalidArgument("q must be >= 1")
    if not x / q > math.e:
        raise InvalidArgument(f"loglog undefined: x/q = {x / q:.6g} <= e")
    if M < 1:
        raise InvalidArgument("M must be >= 1")
    coeffs.require(t, q, M)
    terms = [float(omega_mu(t, q))]
    for g in divisors(t, q):
        mu = mobius(t, g)
        if not mu:
            continue
        L = math.log(x * g / q)
        ll = math.log(L)
        inner = math.fsum(coeffs.P(j, g, ll) / L ** (j - 1) for j in range(1, M + 1))
        terms.append(g * mu / totient(t, g) * inner)
    return x / q * math.fsum(terms)


def rational_sums(values, q: int, x: int) -> dict[int, complex]:
    """F_x(a/q) for every a coprime to q, from one pass of residue sums."""
    R = residue_sums(values, q, x)
    r = np.arange(q, dtype=np.int64)
    out = {}
    from ._fallback import sincos_turns

    for a in range(q):
        if math.gcd(a, q) != 1:
            continue
        c, s = sincos_turns(((r * a) % q) / q)
        out[a] = complex(math.fsum(R * c), math.fsum(R * s))
    return out


def local_errors(t: FactorTable, values, qmax: int, xs, M: int, coeffs: CoeffTable) -> dict[tuple[int, int, int], float]:
    """|F_x(a/q) - frak_f(q; x, M)| / (x / log x) keyed by (a, q, x)."""
    out = {}
    for x in xs:
        for q in range(1, int(qmax) + 1):
            f = frak_f(t, q, x, M, coeffs)
            for a, F in rational_sums(values, q, x).items():
                out[(a, q, int(x))] = abs(F - f) / (x / math.log(x))
    return out


# ---------------------------------------------------------------- singular series


@dataclass(frozen=True)
class SingularSeriesResult:
    N: int
    M: int
    Q: int
    partial: float
    tail_estimate: float
    terms: np.ndarray  # terms[q - 1] = (frak_f(q; N, M)/N)^3 c_q(N)

    def partial_at(self, Q: int) -> float:
        return math.fsum(self.terms[: int(Q)])

    def decay_constant(self, exponent: float) -> float:
        """max over q of |term(q)| q^exponent."""
        q = np.arange(1, self.terms.size + 1, dtype=np.float64)
        return float(np.max(np.abs(self.terms) * q**exponent))


def tail_estimate(N: int, M: int, Q: float) -> float:
    """(M loglog N)^3 / Q^(1 - ETA)."""
    return (M * math.log(math.log(N))) ** 3 / float(Q) ** (1 - ETA)


def singular_series(t: FactorTable, N: int, M: int, Q: int, coeffs: CoeffTable) -> SingularSeriesResult:
    N, M, Q = int(N), int(M), int(Q)
    if Q < 1:
        raise InvalidArgument("Q must be >= 1")
    if N < 3:
        raise InvalidArgument("N must be >= 3")
    terms = np.empty(Q, dtype=np.float64)
    for q in range(1, Q + 1):
        terms[q - 1] = (frak_f(t, q, N, M, coeffs) / N) ** 3 * ramanujan_sum(t, q, N)
    return SingularSeriesResult(N, M, Q, math.fsum(terms), tail_estimate(N, M, Q), terms)


def predict_r(t: FactorTable, N: int, M: int, Q: int, coeffs: CoeffTable) -> float:
    """Main-term prediction S(N, M; Q) N^2 / 2."""
    return singular_series(t, N, M, Q, coeffs).partial * N * N / 2


# ---------------------------------------------------------------- quadrature


def _gl_nodes(lo: float, hi: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return x, w


def _panels_for(width: float, freq: float, nodes: int) -> int:
    # at most 6 radians of the fastest oscillation per panel (16-point rule error
    # ~ 3^32/32! there), and >= nodes total
    need = math.ceil(2 * math.pi * freq * width / 6.0)
    return max(1, need, math.ceil(nodes / GL_ORDER))


def _cis(turns: np.ndarray) -> np.ndarray:
    from ._fallback import sincos_turns

    c, s = sincos_turns(np.mod(turns, 1.0))
    return c + 1j * s


def _csum(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def u_cube_integral(N: int, Q: float, K: int | None = None) -> complex:
    """Integral of u(beta)^3 e(-N beta) over |beta| <= Q/N (window capped at 1/2).

    Composite 16-point Gauss-Legendre with at least K nodes (default 10^4),
    refined so no panel spans more than 6 radians of the top frequency 2N.
    """
    N = int(N)
    if N < 1 or not Q > 0:
        raise InvalidArgument("need N >= 1 and Q > 0")
    w = min(0.5, Q / N)
    K = 10**4 if K is None else int(K)
    x, wt = _gl_nodes(-w, w, _panels_for(2 * w, 2 * N, K))
    g = u_sum_array(x, N) ** 3 * _cis(-N * x)
    return _csum(wt * g)


def triple_counts(N: int) -> np.ndarray:
    """r3[m] = #{(n1, n2, n3) in [1, N]^3 : n1 + n2 + n3 = m} for 0 <= m <= 3N."""
    m = np.arange(3 * N + 1, dtype=np.int64)
    out = np.zeros_like(m)
    for k, sign in enumerate((1, -3, 3, -1)):
        s = m - k * N - 1
        out += sign * np.where(s >= 2, s * (s - 1) // 2, 0)
    return out


def u_cube_integral_exact(N: int, Q: float) -> float:
    """Same integral from the expansion u^3 = sum_m r3(m) e(m beta).

    Each term integrates to sin(2 pi (m-N) w) / (pi (m-N)), or 2w at m = N.
    """
    N = int(N)
    w = min(0.5, Q / N)
    r3 = triple_counts(N).astype(np.float64)
    k = np.arange(r3.size, dtype=np.float64) - N
    nz = k != 0
    vals = np.empty_like(k)
    vals[nz] = np.sin(2 * np.pi * k[nz] * w) / (np.pi * k[nz]) if w < 0.5 else 0.0
    vals[~nz] = 2 * w
    return math.fsum(r3 * vals)


@dataclass(frozen=True)
class ArcIntegral:
    """Integral of F_N^3 e(-N alpha) over one major arc, with its u-model."""

    a: int
    q: int
    lo: float
    hi: float
    value: complex
    model: complex | None = None


@dataclass(frozen=True)
class MajorArcResult:
    N: int
    Q: float
    total: complex
    arcs: list[ArcIntegral]
    model_total: complex | None = None

    @property
    def residual(self) -> complex | None:
        """Measured major-arc integral minus the u-approximation."""
        return None if self.model_total is None else self.total - self.model_total

    def share(self, q: int) -> float:
        """Fraction of the real part carried by arcs with denominator q."""
        part = math.fsum(arc.value.real for arc in self.arcs if arc.q == q)
        return part / self.total.real


def _arc_values(values, N: int, x: np.ndarray, threads: int) -> np.ndarray:
    F = exp_sum_many(values, x, N, threads=threads)
    return F**3 * _cis(-N * x)


def major_arc_integral(
    values,
    sys: ArcSystem,
    M: int | None = None,
    coeffs: CoeffTable | None = None,
    K: int = 256,
    *,
    t: FactorTable | None = None,
    threads: int = 1,
) -> MajorArcResult:
    """Sum over major arcs of the integral of F_N(alpha)^3 e(-N alpha), F_N evaluated directly.

    With ``coeffs`` (and ``t``) each arc also gets the model
    (frak_f(q; N, M)/N)^3 e(-Na/q) times the u^3 integral over the same window.
    """
    N = sys.N
    K = int(K)
    if K < 64:
        raise InvalidArgument("need at least 64 quadrature nodes per arc")
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.shape[0] < N + 1:
        raise OutOfRange(f"value table shorter than N + 1 = {N + 1}")
    if coeffs is not None and (t is None or M is None):
        raise InvalidArgument("the u-model needs t and M alongside coeffs")
    arcs = []
    fcache: dict[int, float] = {}
    for c, lo, hi in sys.intervals():
        x, wt = _gl_nodes(lo, hi, _panels_for(hi - lo, 2 * N, K))
        val = _csum(wt * _arc_values(values, N, x, threads))
        model = None
        if coeffs is not None:
            if c.q not in fcache:
                fcache[c.q] = frak_f(t, c.q, N, M, coeffs) / N
            beta = x - c.a / c.q
            u = u_sum_array(beta, N) ** 3 * _cis(-N * beta)
            phase = _cis(np.array([-(N * c.a % c.q) / c.q]))[0]
            model = fcache[c.q] ** 3 * phase * _csum(wt * u)
        arcs.append(ArcIntegral(c.a, c.q, lo, hi, val, model))
    total = complex(math.fsum(a.value.real for a in arcs), math.fsum(a.value.imag for a in arcs))
    model_total = None
    if coeffs is not None:
        model_total = complex(math.fsum(a.model.real for a in arcs), math.fsum(a.model.imag for a in arcs))
    return MajorArcResult(N, sys.Q, total, arcs, model_total)


def minor_arc_integral(values, sys: ArcSystem, K: int = 256, *, threads: int = 1) -> complex:
    """Integral of F_N^3 e(-N alpha) over the complement of the major arcs in [0, 1]."""
    N = sys.N
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.shape[0] < N + 1:
        raise OutOfRange(f"value table shorter than N + 1 = {N + 1}")
    parts = []
    for lo, hi in sys.minor_intervals():
        x, wt = _gl_nodes(lo, hi, _panels_for(hi - lo, 2 * N, min(K, 64)))
        parts.append(_csum(wt * _arc_values(values, N, x, threads)))
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
