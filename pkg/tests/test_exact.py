import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from friable_lab.census import Params, count_irreducibles
from friable_lab.errors import BudgetExceeded, NonPrimeField
from friable_lab.exact import (
    ExactProb,
    expectation_gap,
    expectation_gap_termwise,
    expected_largest,
    friable_prob,
    hildebrand_rhs,
    perm_prob,
    poly_prob,
    psi_perm,
    psi_perm_oracle,
    psi_poly,
    psi_poly_oracle,
    psi_poly_product,
)

QS = [2, 3, 4, 5, 7, 8, 9]


def test_involution_numbers():
    # permutations with cycles of length <= 2 (telephone numbers)
    assert [psi_perm(n, 2) for n in range(0, 9)] == [1, 1, 2, 4, 10, 26, 76, 232, 764]


def test_small_perm_values():
    assert psi_perm(3, 2) == 4
    assert psi_perm(4, 2) == 10
    assert psi_perm(6, 3) == psi_perm_oracle(6, 3) == 276
    assert psi_perm(5, 1) == 1
    assert psi_perm(3, 7) == 6


def test_small_poly_values():
    assert psi_poly(2, 2, 1) == 3
    assert psi_poly(3, 4, 2) == 39
    assert psi_poly(3, 4, 1) == 15
    assert psi_poly_oracle(2, 4, 1) == 5
    assert psi_poly_product(3, 4, 2) == [1, 3, 9, 19, 39]


def test_oracle_errors():
    with pytest.raises(NonPrimeField):
        psi_poly_oracle(4, 2, 1)
    with pytest.raises(BudgetExceeded):
        psi_poly_oracle(2, 21, 3)
    with pytest.raises(BudgetExceeded):
        psi_perm_oracle(31, 3)


def test_poly_oracle_degree_one_factors():
    # enumeration recovers pi_q(d) as the count of d-friable minus (d-1)-friable
    for q, d in [(2, 5), (3, 4), (5, 3)]:
        assert psi_poly_oracle(q, d, d) - psi_poly_oracle(q, d, d - 1) == count_irreducibles(q, d)


def test_exact_prob():
    p = ExactProb(39, 81)
    assert p.as_fraction() == Fraction(13, 27)
    assert p.reduced() == ExactProb(13, 27)
    assert p == Fraction(13, 27)
    assert ExactProb(1, 3) < ExactProb(1, 2)
    assert math.isclose(p.log(), math.log(13 / 27))
    assert abs(float(p) - 13 / 27) < 1e-16


def test_friable_profile():
    prof = friable_prob("poly", Params(3, 4, 2))
    assert (prof.psi, prof.total) == (39, 81)
    with pytest.raises(ValueError):
        friable_prob("tree", Params(3, 4, 2))


def test_expectations():
    assert expected_largest("perm", 2) == Fraction(3, 2)
    assert expected_largest("poly", 2, 2) == Fraction(5, 4)
    assert expectation_gap(2, 2) == Fraction(1, 4)
    assert expectation_gap(4, 3) == Fraction(17, 72)
    assert expectation_gap(1, 5) == 0
    # E L(pi_3) = (1*1 + 2*3 + 3*2)/6
    assert expected_largest("perm", 3) == Fraction(13, 6)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 14), st.integers(1, 16))
def test_perm_recurrence_matches_partition_oracle(n, m):
    assert psi_perm(n, m) == psi_perm_oracle(n, m)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 9), (3, 6), (5, 4), (7, 3)]), st.data())
def test_poly_recurrence_matches_enumeration(qn, data):
    q, n_max = qn
    n = data.draw(st.integers(1, n_max))
    m = data.draw(st.integers(1, n))
    assert psi_poly(q, n, m) == psi_poly_oracle(q, n, m)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(QS), st.integers(1, 30), st.integers(1, 30))
def test_product_route_and_identity(q, n, m):
    row = psi_poly_product(q, n, m)
    assert row[n] == psi_poly(q, n, m)
    assert n * row[n] == hildebrand_rhs(q, n, m, row)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(QS), st.integers(1, 30))
def test_boundary_values(q, n):
    assert psi_poly(q, n, n) == q**n
    assert psi_poly(q, n, 1) == math.comb(q + n - 1, n)
    assert psi_perm(n, n) == math.factorial(n)
    if n >= 2:
        assert psi_perm(n, n - 1) == math.factorial(n) - math.factorial(n - 1)
        assert q**n - psi_poly(q, n, n - 1) == count_irreducibles(q, n)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(QS), st.integers(2, 25), st.data())
def test_monotone_in_m_and_positivity(q, n, data):
    m = data.draw(st.integers(1, n - 1))
    assert psi_poly(q, n, m) <= psi_poly(q, n, m + 1)
    assert psi_perm(n, m) <= psi_perm(n, m + 1)
    assert poly_prob(q, n, m) >= perm_prob(n, m)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5, 8]), st.integers(1, 20))
def test_gap_routes_agree(q, n):
    g = expectation_gap_termwise(n, q)
    assert g == expected_largest("perm", n) - expected_largest("poly", n, q)
    assert g >= 0
