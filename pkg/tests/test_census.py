from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from friable_lab.census import (
    Params,
    a_coefficient,
    count_irreducibles,
    divisors,
    irreducible_table,
    mobius,
    validate_prime_power,
    weighted_divisor_sum,
)
from friable_lab.errors import NotAPrimePower

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32, 49]


def test_known_irreducible_counts():
    # classical small tables (also checked against enumeration in test_exact)
    assert [count_irreducibles(2, d) for d in range(1, 9)] == [2, 1, 2, 3, 6, 9, 18, 30]
    assert [count_irreducibles(3, d) for d in range(1, 6)] == [3, 3, 8, 18, 48]
    assert [count_irreducibles(4, d) for d in range(1, 4)] == [4, 6, 20]


@pytest.mark.parametrize("q,expected", [(2, (2, 1)), (9, (3, 2)), (1024, (2, 10)), (49, (7, 2)), (13, (13, 1))])
def test_validate_prime_power(q, expected):
    assert validate_prime_power(q) == expected


@pytest.mark.parametrize("q", [0, 1, 6, 12, 100, -4, 2.0, True])
def test_rejects_non_prime_powers(q):
    with pytest.raises(NotAPrimePower):
        validate_prime_power(q)


def test_params_validation():
    p = Params(9, 10, 4)
    assert (p.p, p.k, p.u) == (3, 2, 2.5)
    with pytest.raises(ValueError):
        Params(2, 5, 6)
    with pytest.raises(ValueError):
        Params(2, 0, 1)
    with pytest.raises(NotAPrimePower):
        Params(6, 3, 2)


def test_mobius_and_divisors():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]


def test_weighted_sum_values():
    assert weighted_divisor_sum(2, 1, 2) == 2
    assert weighted_divisor_sum(2, 2, 2) == 4
    assert weighted_divisor_sum(3, 4, 4) == 81
    assert a_coefficient(3, 4, 4) == 1
    assert a_coefficient(2, 1, 3) == Fraction(2, 8)


def test_table_growth_keeps_values():
    small = irreducible_table(5, 3)
    big = irreducible_table(5, 40)
    assert big.max_degree >= 40
    assert small.counts[1:4] == big.counts[1:4]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIME_POWERS), st.integers(1, 60))
def test_gauss_identity(q, n):
    assert sum(d * count_irreducibles(q, d) for d in divisors(n)) == q**n


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIME_POWERS), st.integers(1, 40), st.integers(1, 40))
def test_weighted_sum_saturates(q, m, i):
    w = weighted_divisor_sum(q, m, i)
    assert 0 < w <= q**i
    if m >= i:
        assert w == q**i


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIME_POWERS), st.integers(1, 60))
def test_counts_bounds(q, d):
    # the proper-divisor terms of the Gauss identity sum to less than 2 q^{d/2}
    c = count_irreducibles(q, d)
    assert 0 <= q**d - c * d < 2 * q ** (d // 2)
