import numpy as np
import pytest
import sympy

from omegacircle.additive import (
    OMEGA,
    SMALL_OMEGA,
    AdditiveFunction,
    by_name,
    cap_F,
    integer_table,
    is_in_F0,
    make_omega_k,
    value_table,
)
from omegacircle.errors import InvalidArgument, OutOfRange
from omegacircle.ntcore import build_factor_table


def test_value_table_examples(small_table):
    assert list(value_table(OMEGA, small_table, 10)[1:]) == [0, 1, 1, 2, 1, 2, 1, 3, 2, 2]
    assert list(value_table(SMALL_OMEGA, small_table, 6)[1:]) == [0, 1, 1, 1, 1, 2]
    assert value_table(OMEGA, small_table, 10)[0] == 0


def test_value_table_matches_factorization(small_table):
    # sum over p^a || n of a^2, checked against sympy for a spread of n
    f = make_omega_k(2)
    v = value_table(f, small_table, 10**5)
    for n in list(range(1, 2000)) + list(range(99000, 100001, 7)):
        assert v[n] == sum(e * e for e in sympy.factorint(n).values())


def test_general_rule_not_in_F0(small_table):
    beta = AdditiveFunction(lambda p, ell: p, "sum of prime divisors")
    assert not is_in_F0(beta, small_table)
    v = value_table(beta, small_table, 200)
    assert v[60] == 2 + 3 + 5 and v[97] == 97 and v[128] == 2


def test_scalar_only_rule_is_vectorized(small_table):
    f = AdditiveFunction(lambda p, ell: 1.0 if int(ell) == 1 else 5.0, "scalar")
    v = value_table(f, small_table, 50)
    assert v[12] == 5 + 1 and v[30] == 3 and v[49] == 5


@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_omega_k_in_F0(small_table, k):
    assert is_in_F0(make_omega_k(k), small_table)


def test_make_omega_k_names_and_errors():
    assert make_omega_k(0).name == "omega" and make_omega_k(1).name == "Omega"
    assert make_omega_k(1).totally_additive and not make_omega_k(0).totally_additive
    with pytest.raises(InvalidArgument):
        make_omega_k(-1)
    assert by_name("Omega_3").name == "Omega_3"
    with pytest.raises(InvalidArgument):
        by_name("lambda")


def test_cap_F_examples(small_table):
    assert cap_F(SMALL_OMEGA, small_table, 10**5) == 1
    assert cap_F(OMEGA, small_table, 10) == 3
    assert cap_F(OMEGA, build_factor_table(10**6), 10**6) == 19
    assert cap_F(make_omega_k(2), small_table, 10**5) == 16**2  # 2^16 <= 10^5
    with pytest.raises(InvalidArgument):
        cap_F(OMEGA, small_table, 1)
    with pytest.raises(OutOfRange):
        cap_F(OMEGA, small_table, 10**6)


def test_call_single_value(small_table):
    assert OMEGA(small_table, 360) == 6
    assert OMEGA(small_table, 1) == 0


def test_integer_table_rejects_fractions():
    with pytest.raises(InvalidArgument):
        integer_table(np.array([0.0, 1.5]))
    assert integer_table(np.array([0.0, 2.0])).dtype == np.int64


def test_accumulate_backends_agree(kern, small_table):
    rng = np.random.default_rng(3)
    base = rng.random(small_table.limit + 1)
    a, b = base.copy(), base.copy()
    kern.accumulate_additive(np.ascontiguousarray(small_table.spf), a)
    # reference: f(n) = inc(n) + f(n / spf(n)) in increasing n
    spf = small_table.spf
    b[1] = 0.0
    for n in range(2, 3000):
        b[n] = base[n] + b[n // int(spf[n])]
    assert np.allclose(a[:3000], b[:3000], rtol=0, atol=1e-12)
