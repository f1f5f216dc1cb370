import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from friable_lab.dickman import (
    EULER_GAMMA,
    LogReal,
    delay_integral,
    delay_integral_ratio,
    exp_integral_I,
    harmonic,
    log_rho,
    rho,
    rho_laplace,
    rho_mp,
    rho_table,
    rho_value,
    t_correction,
    xi,
    xi_prime,
)
from friable_lab.errors import BudgetExceeded, DomainError, OutOfTabulatedRange


def _rho_on_2_3(u):
    # closed form on [2, 3]: 1 - log u + integral_2^u log(t-1)/t dt
    with mpmath.workdps(30):
        return float(1 - mpmath.log(u) + mpmath.quad(lambda t: mpmath.log(t - 1) / t, [2, u]))


def test_rho_first_pieces():
    assert rho_value(0.0) == 1.0
    assert rho_value(1.0) == 1.0
    for u in (1.2, 1.5, 1.9):
        assert abs(rho_value(u) - (1 - math.log(u))) < 1e-15
    assert abs(rho_value(2.0) - (1 - math.log(2))) < 1e-12
    for u in (2.3, 2.5, 2.9, 3.0):
        assert abs(rho_value(u) / _rho_on_2_3(u) - 1) < 1e-12


@pytest.mark.parametrize(
    "u,ref",
    [
        (4, 4.9109256477608e-3),
        (5, 3.5472470045604e-4),
        (6, 1.9649696353955e-5),
        (10, 2.7701718377260e-11),
    ],
)
def test_rho_tabulated_reference(u, ref):
    # published tables of the Dickman function
    assert abs(rho_value(u) / ref - 1) < 1e-11


@pytest.mark.parametrize("u", [1.5, 2.5, 5, 10, 20, 37.3, 60, 100])
def test_delay_identity(u):
    assert abs(delay_integral_ratio(u) - u) <= 1e-10 * u
    assert abs(delay_integral(u) - u * rho_value(u)) <= 1e-10


def test_rho_errors():
    with pytest.raises(OutOfTabulatedRange):
        rho(-0.1)
    with pytest.raises(OutOfTabulatedRange):
        rho(rho_table().u_max + 1)
    with pytest.raises(ValueError):
        rho(3.0, tol=1e-16)


def test_rho_logreal_consistency():
    r = rho(30.0)
    assert isinstance(r, LogReal)
    assert math.isclose(r.value, math.exp(log_rho(30.0)), rel_tol=1e-15)
    assert r.abs_err_budget <= 1e-13
    assert abs(float(rho_mp(30.0)) / r.value - 1) < 1e-13


@settings(max_examples=100, deadline=None)
@given(st.floats(1.0, 99.0), st.floats(0.0, 1.0))
def test_rho_decreasing(u, d):
    assert rho_value(u + d) <= rho_value(u)


@settings(max_examples=60, deadline=None)
@given(st.floats(1.05, 90.0))
def test_rho_derivative_equation(u):
    # u rho'(u) = -rho(u - 1), checked with an mpmath central difference
    with mpmath.workdps(40):
        h = mpmath.mpf("1e-12")
        d = (rho_mp(mpmath.mpf(u) + h) - rho_mp(mpmath.mpf(u) - h)) / (2 * h)
        lhs = u * d
        rhs = -rho_mp(mpmath.mpf(u) - 1)
    if abs(u - round(u)) > 1e-9:
        assert abs(lhs / rhs - 1) < 1e-8


def test_monotone_grid_to_30():
    vals = [rho_value(k / 100) for k in range(0, 3001)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("u", [1.01, 1.5, 2.0, 10.0, 100.0, 1e4, 1e8])
def test_xi_root(u):
    s = xi(u)
    assert math.log(u) < s <= 2 * math.log(u)
    assert abs(math.expm1(s) - u * s) <= 1e-10 * (1 + u * s)


def test_xi_domain():
    with pytest.raises(DomainError):
        xi(1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.001, 1e6))
def test_xi_prime_matches_difference(u):
    h = 1e-6 * u
    fd = (xi(u + h) - xi(u - h)) / (2 * h)
    assert abs(xi_prime(u) / fd - 1) < 1e-5


@pytest.mark.parametrize("s", [0.5, 1.0, 2.5, 10.0, 40.0])
def test_I_positive_real_against_ei(s):
    ref = float(mpmath.ei(s) - mpmath.euler - mpmath.log(s))
    assert abs(exp_integral_I(s) / ref - 1) < 1e-13


@pytest.mark.parametrize("s", [-0.5, -3.0, -30.0, -150.0])
def test_I_negative_real_against_e1(s):
    ref = float(-mpmath.e1(-s) - mpmath.euler - mpmath.log(-s))
    assert abs(exp_integral_I(s) - ref) < 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("s", [complex(1, 2), complex(-4, 7), complex(0.1, -0.3)])
def test_I_complex_against_quadrature(s):
    with mpmath.workdps(30):
        ref = complex(mpmath.quad(lambda v: mpmath.expm1(v) / v, [0, mpmath.mpc(s.real, s.imag)]))
    assert abs(exp_integral_I(s) - ref) < 1e-12 * max(1.0, abs(ref))


def test_I_budget():
    with pytest.raises(BudgetExceeded):
        exp_integral_I(250.0)


def test_laplace_transform():
    assert abs(rho_laplace(0.0) - math.exp(EULER_GAMMA)) < 1e-14
    with mpmath.workdps(30):
        quad = float(mpmath.quad(lambda v: rho_mp(v) * mpmath.exp(-v), [0, 1, 2, 3, 5, 10, 20, 40, 100]))
    assert abs(rho_laplace(1.0) - quad) < 1e-8


def test_t_correction():
    assert t_correction(0.0, 5) == 0.0
    with pytest.raises(DomainError):
        t_correction(complex(0, 4 * math.pi), 3)
    with pytest.raises(DomainError):
        t_correction(1.0, 0)


@settings(max_examples=25, deadline=None)
@given(st.floats(1.05, 2.5), st.integers(2, 25))
def test_generating_function_bridge(z, m):
    # sum_{i<=m} z^i/i = H_m + I(m log z) + T(m log z)
    s = m * math.log(z)
    if s > math.pi * m:
        return
    lhs = math.fsum(z**i / i for i in range(1, m + 1))
    rhs = float(harmonic(m)) + exp_integral_I(s) + t_correction(s, m)
    assert abs(lhs / rhs - 1) < 1e-10


def test_harmonic():
    assert harmonic(1) == 1
    assert harmonic(4) == Fraction(25, 12)
    assert harmonic(100) == sum(Fraction(1, k) for k in range(1, 101))
