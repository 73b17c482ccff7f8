import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hlcesaro import CesaroQuery, DomainError, InvalidArgument, OutOfRange, ZeroList, sieve_von_mangoldt
from hlcesaro.oracles import (FAMILIES, LINNIK_C, HalfPlanePoint, check_laplace_identity,
                              check_linnik_expansion, check_theta_modularity, fit_linnik_constant,
                              laplace_line_integral, lhs_line_integral_check, linnik_grid, linnik_shape,
                              log_power, omega2_direct, run_oracle_suite, s_tilde_direct)

OMEGA2_AT_1 = 0.38631860241332607652
# direct summation in mpmath over m <= 10^4
S_TILDE_REF = complex(-1.2454560210364539895, -2.1122445036914927339)


def test_half_plane_point():
    assert HalfPlanePoint(0.5, -2).z == 0.5 - 2j
    assert HalfPlanePoint.of(1 + 1j) == HalfPlanePoint(1.0, 1.0)
    with pytest.raises(DomainError):
        HalfPlanePoint(0.0, 1.0)
    with pytest.raises(InvalidArgument):
        HalfPlanePoint(float("nan"))


def test_omega2_values():
    assert omega2_direct(1) == pytest.approx(OMEGA2_AT_1, rel=1e-15)
    w = omega2_direct(50)
    assert abs(w) < 1e-21
    assert w.real == pytest.approx(math.exp(-50), rel=1e-15)
    assert abs(omega2_direct(0.01 + 5j)) <= omega2_direct(0.01).real


def test_omega2_matches_jacobi_theta():
    # theta_3(0, q) = 1 + 2 omega2 with q = e^-z
    for z in (0.3, 0.05 + 0.2j, 2 - 1j):
        ref = (mpmath.jtheta(3, 0, mpmath.exp(-mpmath.mpc(z))) - 1) / 2
        assert abs(omega2_direct(z) - complex(ref)) < 1e-13 * abs(complex(ref))


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=-200, max_value=200))
def test_omega2_bound(y):
    a = 0.02
    assert abs(omega2_direct(complex(a, y))) <= omega2_direct(a).real * (1 + 1e-14)


def test_s_tilde_values(table):
    small = s_tilde_direct(0.01, table)
    assert abs(small.value.real - 100) < 10
    assert abs(small.value.imag) == 0
    assert abs(s_tilde_direct(0.01 + 0.5j, table).value - S_TILDE_REF) < 1e-13 * abs(S_TILDE_REF)
    big = s_tilde_direct(10, table).value
    assert big.real == pytest.approx(math.log(2) * math.exp(-20), rel=1e-4)


def test_s_tilde_refuses_short_table():
    with pytest.raises(OutOfRange, match="4000"):
        s_tilde_direct(0.01, sieve_von_mangoldt(1000))


@pytest.mark.parametrize("z, tol", [(1, 1e-12), (math.pi, 1e-15), (0.05 + 0.2j, 1e-10)])
def test_theta_modularity_examples(z, tol):
    assert check_theta_modularity(z) < tol


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.01, max_value=10), st.floats(min_value=-10, max_value=10))
def test_theta_modularity_region(a, r):
    assert check_theta_modularity(complex(a, r * a)) < 1e-10


def test_theta_modularity_catches_a_wrong_branch():
    z = complex(0.3, -2.0)
    root = -(math.pi / z) ** 0.5
    wrong = 0.5 * root - 0.5 + root * omega2_direct(math.pi ** 2 / z)
    assert abs(omega2_direct(z) - wrong) > 1e-3


@pytest.mark.parametrize("s", [2, 3, 5])
def test_laplace_identity(s):
    assert check_laplace_identity(s) < 1e-6


def test_laplace_identity_high_order():
    assert check_laplace_identity(5) < 1e-8
    # the substitution v = a + i u leaves the factor e^-a
    value = laplace_line_integral(5, 1.0, 1e4, 1.0) * math.e
    assert abs(value - 1 / 24) < 1e-8


def test_laplace_complex_and_shifted():
    assert check_laplace_identity(2 + 3j) < 1e-6
    assert check_laplace_identity(3, a=0.5) < 1e-6
    assert check_laplace_identity(3, d=2.5) < 1e-6
    assert check_laplace_identity(3, d=-1.0) < 1e-6


def test_laplace_principal_value():
    # d = 0, s = 1: the integral (1/2 pi) int du / (a + i u) over |u| <= T is atan(T/a)/pi
    for span in (1e2, 1e3, 1e4):
        value = laplace_line_integral(1, 1.0, span, 0.0)
        assert abs(value - math.atan(span) / math.pi) < 1e-10
        assert abs(value - 0.5) < 1.1 / (math.pi * span)


def test_laplace_domain():
    with pytest.raises(DomainError):
        check_laplace_identity(-0.5)


def test_log_power_magnitude_law():
    rng = np.random.default_rng(7)
    for _ in range(20):
        z = complex(rng.uniform(0.01, 3), rng.uniform(-10, 10))
        w = complex(rng.uniform(-1, 3), rng.uniform(-30, 30))
        lp = log_power(z, w)
        assert abs(cmath.exp(lp) - z ** (-w)) <= 1e-12 * abs(z ** (-w))
        mag = abs(z) ** (-w.real) * math.exp(w.imag * math.atan2(z.imag, z.real))
        assert math.exp(lp.real) == pytest.approx(mag, rel=1e-12)


def test_real_part_law():
    for n in (3, 100, 10 ** 5):
        for y in (-1.0, 0.0, 3e-3, 0.25):
            z = complex(1 / n, y)
            expected = n / (1 + n * n * y * y)
            assert abs((1 / z).real - expected) <= 1e-14 * expected


def test_linnik_shape():
    assert linnik_shape(0.04) == pytest.approx(0.2)
    assert linnik_shape(complex(0.01, 0.01)) == pytest.approx(abs(complex(0.01, 0.01)) ** 0.5)
    assert linnik_shape(complex(0.01, 0.1)) == pytest.approx(0.1005 ** 0.5 * (1 + math.log(10) ** 2), rel=1e-3)


@pytest.fixture(scope="module")
def big_table():
    return sieve_von_mangoldt(20_000)


def test_linnik_grid_passes(zeros, big_table):
    for p in linnik_grid():
        chk = check_linnik_expansion(p, zeros, big_table, 1000)
        assert chk.passed, (p, chk)


def test_linnik_fitted_constant(zeros, big_table):
    c = fit_linnik_constant(linnik_grid(), zeros, big_table, 1000)
    assert 0.5 < c <= LINNIK_C


def test_linnik_example_points(zeros, big_table):
    chk = check_linnik_expansion(0.05, zeros, big_table, 1000)
    assert chk.residual <= chk.bound
    # |y| = 10 a: the bound carries the log^2 factor
    p = HalfPlanePoint(0.05, 0.5)
    chk = check_linnik_expansion(p, zeros, big_table, 1000)
    assert chk.bound == pytest.approx(LINNIK_C * abs(p.z) ** 0.5 * (1 + math.log(10) ** 2))
    assert chk.residual <= chk.bound


def test_linnik_constant_term(zeros, big_table):
    # the literal difference tends to log(2 pi) as z -> 0 along the real axis
    chk = check_linnik_expansion(0.002, zeros, big_table, 1000)
    assert chk.literal_residual == pytest.approx(math.log(2 * math.pi), abs=0.2)
    assert chk.residual < 0.1


def test_linnik_more_zeros_does_not_hurt(zeros, big_table):
    a = check_linnik_expansion(0.05, zeros, big_table, 1000).residual
    b = check_linnik_expansion(0.05, zeros, big_table, 2000).residual
    assert b <= a + 1e-12


@pytest.mark.parametrize("index", [0, 1, 4])
def test_linnik_detects_tampered_zero(zeros, big_table, index):
    g = zeros.head(1000).gammas.copy()
    g[index] += 0.5
    bad = ZeroList(np.sort(g))
    failed = [p for p in linnik_grid() if not check_linnik_expansion(p, bad, big_table).passed]
    assert failed


def test_linnik_domain(zeros, big_table):
    with pytest.raises(DomainError):
        check_linnik_expansion(2.0, zeros, big_table)


@pytest.mark.parametrize("n", [4, 20, 50, 100])
def test_line_integral_check(table, n):
    assert lhs_line_integral_check(CesaroQuery(n, 2), table) < 1e-4


def test_line_integral_exploratory_order(table):
    assert lhs_line_integral_check(CesaroQuery(50, 1.2), table) < 1e-3


def test_line_integral_limits(table):
    with pytest.raises(OutOfRange):
        lhs_line_integral_check(CesaroQuery(201, 2), sieve_von_mangoldt(300))
    with pytest.raises(DomainError):
        lhs_line_integral_check(CesaroQuery(50, 0.5), table)


def test_suite_passes(zeros):
    results = run_oracle_suite(zeros)
    assert {r.family for r in results} == set(FAMILIES)
    failed = [r for r in results if not r.passed]
    assert not failed, failed


def test_suite_filter():
    results = run_oracle_suite(only=["theta-modularity"])
    assert results and {r.family for r in results} == {"theta-modularity"}
    with pytest.raises(InvalidArgument):
        run_oracle_suite(only=["nonsense"])
    with pytest.raises(InvalidArgument):
        run_oracle_suite(only=["linnik"])
