import cmath
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from supershift_lab.errors import DomainError, PrecisionError
from supershift_lab.numkernel import PrecisionPolicy
from supershift_lab.reports import parse_range
from supershift_lab.sampling import EpsilonSpec, frequencies, upsilon, upsilon_inv
from supershift_lab.superosc import (coeff, coefficients, eval_closed, eval_sum, lagrange_bound,
                                     lagrange_error, lagrange_eval, superosc_convergence)


def test_epsilon_families():
    assert EpsilonSpec.parse("c_over_N:1").at(4) == 0.25
    assert EpsilonSpec.parse("c_over_sqrtN:1").at(1) == 0.999
    assert EpsilonSpec.parse("zero").at(10) == 0.0
    lst = EpsilonSpec.parse("list:0.1,0.05")
    assert (lst.at(1), lst.at(2), lst.at(3)) == (0.1, 0.05, 0.0)
    assert EpsilonSpec.parse("c_over_logN:1").at(1) == 0.999
    for bad in ("half", "c_over_N:x", "list:", "c_over_N:-1"):
        with pytest.raises(DomainError):
            EpsilonSpec.parse(bad)


def test_frequency_row_and_rescaling():
    row = frequencies(4, 0.0)
    assert row.h == (1.0, 0.5, 0.0, -0.5, -1.0)
    with pytest.raises(DomainError):
        frequencies(3, 1.0)
    assert upsilon(upsilon_inv(0.25)) == 0.25 and upsilon(0.5) == 0


def test_coefficient_examples():
    assert coeff(1, 0, 1) == 1
    assert coeff(2, 1, 0) == 0.5
    with mp.workprec(200):
        assert mp.fsum(coefficients(3, 2.5, 200)) == 1
    with pytest.raises(DomainError):
        coeff(3, 4, 1)


def test_coefficients_against_exact_rationals():
    # independent oracle: exact rational product
    N, a = 17, Fraction(3, 7)
    with mp.workprec(120):
        got = coefficients(N, a, 120)
        for nu in range(N + 1):
            want = math.comb(N, nu) * ((1 + a) / 2) ** (N - nu) * ((1 - a) / 2) ** nu
            assert abs(got[nu] - mpmath.mpf(want.numerator) / want.denominator) <= abs(got[nu]) * 2.0**-115


def test_eval_sum_examples():
    assert abs(complex(eval_sum(1, 0, 2, math.pi / 2)) - 2j) < 1e-15
    assert abs(complex(eval_sum(7, 0, 1, 1)) - cmath.exp(1j)) < 1e-15
    s, c = eval_sum(20, 0.05, 3, 2), eval_closed(20, 0.05, 3, 2)
    assert abs(s - c) <= abs(c) * 2.0**-64


def test_eval_closed_examples():
    for x in (-2.0, 0.3, 4.0):
        assert abs(complex(eval_closed(9, 0, 0, x)) - math.cos(x / 9) ** 9) < 1e-14
    assert abs(complex(eval_closed(1, 0, 0, 0.7)) - math.cos(0.7)) < 1e-15
    z = complex(0.4, -1.2)
    assert abs(complex(eval_closed(13, 0, 1, z)) - cmath.exp(1j * z)) < 1e-14
    s, c = eval_sum(50, 1 / 50, 2, 1.5), eval_closed(50, 1 / 50, 2, 1.5)
    assert abs(s - c) <= abs(c) * 2.0**-64


def test_dual_form_with_brute_force_oracle():
    # direct double-double-free oracle at very high precision
    N, e, a, z = 12, 0.125, 2.5, complex(1.0, 0.5)
    with mp.workprec(400):
        terms = [math.comb(N, nu) * mpmath.mpf((1 + a) / 2) ** (N - nu) * mpmath.mpf((1 - a) / 2) ** nu
                 * mp.expj((1 - 2 * (nu + mpmath.mpf(e) * (N - nu)) / N) * mpmath.mpc(z))
                 for nu in range(N + 1)]
        oracle = mp.fsum(terms)
    assert abs(complex(eval_sum(N, e, a, z)) - complex(oracle)) <= abs(complex(oracle)) * 1e-15


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.floats(0, 0.9), st.floats(-4, 4), st.floats(-8, 8), st.floats(-3, 3))
def test_dual_form_property(N, e, a, x, y):
    s, c = eval_sum(N, e, a, complex(x, y)), eval_closed(N, e, a, complex(x, y))
    assert abs(s - c) <= abs(c) * 2.0**-50


def test_fixed_precision_overflow_is_reported():
    with pytest.raises(PrecisionError):
        eval_sum(200, 0, 4, 1.0, PrecisionPolicy("fixed", 64))


def test_lagrange_examples():
    row = frequencies(6, 0.0)
    z = complex(0.7, 0.2)
    assert abs(complex(lagrange_eval(row, row.h[2], z)) - cmath.exp(1j * row.h[2] * z)) < 1e-15
    assert abs(complex(lagrange_eval(frequencies(1, 0.0), 0, z)) - cmath.cos(z)) < 1e-15
    with pytest.raises(DomainError):
        lagrange_eval([0.5, 0.5, 1.0], 0.2, 1.0)
    assert abs(float(lagrange_bound(5, 2, 1)) - 1.0125) < 1e-15
    assert float(lagrange_bound(10, 1, 1)) == pytest.approx(2**11 / math.factorial(11))
    assert lagrange_bound(7, 1.5, 0) == 0
    assert lagrange_error(5, 2, 1) <= 1.0125


def test_convergence_ladder_examples():
    r = superosc_convergence(1, parse_range("-1:1:0.5"), [5, 10])
    assert max(r.sup_errors) < 1e-15 and r.passed
    r = superosc_convergence(2, parse_range("-3:3:0.1"), [25, 50, 100, 200])
    assert r.passed and r.reduction_factor >= 4
    r = superosc_convergence(0, parse_range("-2:2:0.5"), [10, 20], EpsilonSpec.parse("c_over_N:1"))
    assert r.sup_errors[1] < r.sup_errors[0]
