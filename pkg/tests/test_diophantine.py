import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegacircle.diophantine import (
    ArcSystem,
    Major,
    Minor,
    Rational,
    classify_arc,
    convergents,
    dirichlet_approx,
    farey,
    farey_count,
)
from omegacircle.errors import InvalidArgument


def test_dirichlet_examples():
    ap = dirichlet_approx(math.pi, 10)
    assert (ap.rational.a, ap.rational.q) == (22, 7)
    assert ap.gap == pytest.approx(1.2644892673e-3, rel=1e-8) and ap.gap < 1 / 70
    ap = dirichlet_approx(1 / 3, 3)
    assert (ap.rational.a, ap.rational.q, ap.gap) == (1, 3, 0.0)
    assert dirichlet_approx(Fraction(1, 3), 3).gap == 0.0
    ap = dirichlet_approx(0.5, 10)
    assert (ap.rational.a, ap.rational.q, ap.gap) == (1, 2, 0.0)


def _best_brute(alpha, Q):
    # smallest |alpha - a/q| over q <= Q; the convergent must satisfy the Dirichlet bound
    return min(abs(Fraction(alpha) - Fraction(round(alpha * q), q)) for q in range(1, Q + 1))


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 1, allow_nan=False), st.integers(1, 400))
def test_dirichlet_contract(alpha, Q):
    ap = dirichlet_approx(alpha, Q)
    q = ap.rational.q
    assert 1 <= q <= Q
    assert ap.gap < 1 / (q * Q) or ap.gap == 0
    assert math.gcd(ap.rational.a, q) == 1
    assert ap.gap == abs(alpha - ap.rational.a / q)
    exact = dirichlet_approx(Fraction(alpha), Q)
    assert exact.rational == ap.rational
    assert exact.gap == float(abs(Fraction(alpha) - ap.rational.as_fraction()))


def test_dirichlet_contract_large_sample():
    rng = np.random.default_rng(11)
    for Q in (10, 100, 1000):
        for alpha in rng.random(3000):
            ap = dirichlet_approx(float(alpha), Q)
            assert ap.rational.q <= Q and ap.gap < 1 / (ap.rational.q * Q)


def test_dirichlet_invalid_Q():
    with pytest.raises(InvalidArgument):
        dirichlet_approx(0.3, 0.5)


def test_convergents_of_pi():
    cs = convergents(math.pi)
    assert [(c.a, c.q) for c in cs[:4]] == [(3, 1), (22, 7), (333, 106), (355, 113)]
    assert cs[-1].as_fraction() == Fraction(math.pi)


def test_farey_examples():
    assert [(r.a, r.q) for r in farey(3)] == [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]
    assert [(r.a, r.q) for r in farey(1)] == [(0, 1), (1, 1)]
    assert farey_count(5) == 11
    with pytest.raises(InvalidArgument):
        list(farey(0))


@pytest.mark.parametrize("Q", [2, 7, 20, 50])
def test_farey_matches_set_construction(Q):
    brute = sorted({Fraction(a, q) for q in range(1, Q + 1) for a in range(q + 1)})
    assert [r.as_fraction() for r in farey(Q)] == brute


def test_rational_must_be_reduced():
    with pytest.raises(InvalidArgument):
        Rational(2, 4)
    with pytest.raises(InvalidArgument):
        Rational(1, 0)
    assert Rational(1, 3) < Rational(1, 2)


def test_classify_examples():
    sys = ArcSystem(10**4, 1.0)
    assert sys.Q == pytest.approx(9.2103403720, rel=1e-9)
    assert classify_arc(1 / 3, sys) == Major(3, 1, 1 / 3 - 1 / 3)
    beta = 0.5 * sys.Q / sys.N
    m = classify_arc(0.5 + beta, sys)
    assert (m.q, m.a) == (2, 1) and m.beta == pytest.approx(beta, rel=1e-12)
    golden = (math.sqrt(5) - 1) / 2
    m = classify_arc(golden, sys)
    assert isinstance(m, Minor) and m.q > 9
    with pytest.raises(InvalidArgument):
        classify_arc(1.5, sys)


def test_arc_system_disjointness_guard():
    with pytest.raises(InvalidArgument):
        ArcSystem(1000, 2.0)
    with pytest.raises(InvalidArgument):
        ArcSystem(2, 1.0)


def test_arc_measures_partition_circle():
    sys = ArcSystem(10**5, 1.0)
    assert sys.major_measure() + sys.minor_measure() == pytest.approx(1.0, abs=1e-14)
    arcs = sys.intervals()
    assert all(a[2] < b[1] for a, b in zip(arcs, arcs[1:]))  # disjoint


def test_small_B_keeps_only_q1():
    sys = ArcSystem(10**4, 1e-3)
    assert [(c.a, c.q) for c in sys.centres()] == [(0, 1), (1, 1)]
