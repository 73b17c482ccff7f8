import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hlcesaro import (CesaroQuery, InvalidArgument, Normalization, OutOfRange, cesaro_lhs, r_hl,
                      r_hl_bruteforce, sieve_von_mangoldt)
from hlcesaro.sieve import MAX_N, cesaro_weights, r_hl_array


def test_mangoldt_values():
    t = sieve_von_mangoldt(100)
    assert t[1] == 0.0
    assert t[2] == math.log(2)
    assert t[8] == math.log(2)
    assert t[9] == math.log(3)
    assert t[6] == 0.0
    assert t[97] == math.log(97)
    assert t[64] == math.log(2)


def test_mangoldt_out_of_table():
    t = sieve_von_mangoldt(10)
    with pytest.raises(OutOfRange):
        t[11]
    with pytest.raises(OutOfRange):
        t[0]


def test_r_hl_small_cases(table):
    # 5 = 4 + 1^2; 6 = 2 + 2^2 = 5 + 1^2; 26 = 25 + 1^2 = 17 + 3^2
    assert r_hl(5, table) == pytest.approx(math.log(2), abs=1e-15)
    assert r_hl(6, table) == pytest.approx(math.log(10), abs=1e-14)
    assert r_hl(26, table) == pytest.approx(math.log(85), abs=1e-13)
    assert r_hl(1, table) == 0.0


def test_r_hl_against_trial_division(table):
    for n in (1, 2, 3, 10, 101, 1000, 4999):
        assert r_hl(n, table) == pytest.approx(r_hl_bruteforce(n), abs=1e-12)


def test_r_hl_array_matches_scalar(table):
    arr = r_hl_array(500, table)
    for n in (1, 7, 50, 333, 500):
        assert arr[n] == pytest.approx(r_hl(n, table), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=3000))
def test_r_hl_property(n):
    t = sieve_von_mangoldt(3000)
    assert abs(r_hl(n, t) - r_hl_bruteforce(n)) <= 1e-12


def test_cesaro_lhs_small():
    assert cesaro_lhs(CesaroQuery(4, 2)) == pytest.approx(math.log(2) / 32, rel=1e-15)
    scaled = CesaroQuery(4, 2, Normalization.SCALED)
    assert cesaro_lhs(scaled) == pytest.approx(math.log(2) / 2, rel=1e-15)


def test_cesaro_lhs_extended_precision_agrees():
    q = CesaroQuery(2000, 2.5)
    assert float(cesaro_lhs(q, digits=30)) == pytest.approx(cesaro_lhs(q), rel=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=400), st.floats(min_value=0.5, max_value=4))
def test_scaled_is_divided_times_power(n, k):
    d = cesaro_lhs(CesaroQuery(n, k))
    s = cesaro_lhs(CesaroQuery(n, k, Normalization.SCALED))
    assert s == pytest.approx(d * n ** k, rel=1e-12, abs=1e-300)


def test_weights_vanish_at_n():
    q = CesaroQuery(10, 2)
    w = cesaro_weights(q, np.arange(1, 11))
    assert w[-1] == 0.0
    assert np.all(np.diff(w) < 0)


def test_query_validation():
    with pytest.raises(InvalidArgument):
        CesaroQuery(0, 2)
    with pytest.raises(InvalidArgument):
        CesaroQuery(10, -1)
    with pytest.raises(InvalidArgument):
        CesaroQuery(10, float("nan"))
    with pytest.raises(OutOfRange):
        CesaroQuery(MAX_N + 1, 2)
