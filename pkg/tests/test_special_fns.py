import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import eval_genlaguerre

from vortex_sr.errors import PrecisionError
from vortex_sr.special_fns import (
    bessel_j,
    bessel_j_and_prime,
    bessel_j_oracle,
    bessel_j_prime,
    generalized_laguerre,
    laguerre_function,
    laguerre_function_oracle,
)

# mpmath.laguerre with 40 digits; independent of the package's direct sum
I_50_48_AT_3_7 = -0.06545312836778285370527553
# mpmath.besselj(5, 2)
J5_AT_2 = 0.007039629755871685484243512


# -- generalized Laguerre polynomials ---------------------------------------

def test_polynomial_degree_zero_is_one():
    assert generalized_laguerre(0, 3, 7.2) == 1.0


def test_polynomial_degree_one():
    assert generalized_laguerre(1, 2, 1.0) == pytest.approx(2.0, abs=1e-15)


def test_polynomial_at_zero_is_exact_binomial():
    assert generalized_laguerre(3, 2, 0.0) == 10.0


@given(st.integers(0, 40), st.integers(0, 20), st.floats(0.0, 60.0))
@settings(max_examples=200, deadline=None)
def test_polynomial_matches_scipy(s, l, x):
    ref = eval_genlaguerre(s, l, x)
    assert generalized_laguerre(s, l, x) == pytest.approx(ref, rel=1e-9, abs=1e-9 * max(1.0, abs(ref)))


def test_polynomial_overflow_reports_context():
    with pytest.raises(OverflowError, match="s=600"):
        generalized_laguerre(600, 600, 0.5)


# -- Laguerre functions -------------------------------------------------------

def test_laguerre_closed_forms():
    assert laguerre_function(0, 0, 0.0) == 1.0
    assert laguerre_function(1, 0, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert laguerre_function(0, 0, 10.0) == pytest.approx(math.exp(-5.0), rel=1e-15)


def test_laguerre_reference_value():
    assert laguerre_function(50, 48, 3.7) == pytest.approx(I_50_48_AT_3_7, rel=1e-13)


def test_negative_index_is_zero():
    assert laguerre_function(-1, 3, 0.7) == 0.0
    assert np.all(laguerre_function(2, -1, np.array([0.1, 2.0])) == 0.0)


def test_symmetry_small_example():
    assert laguerre_function(2, 1, 0.5) == pytest.approx(-laguerre_function(1, 2, 0.5), rel=1e-15)
    ref = float(laguerre_function_oracle(1, 2, 0.5))
    assert laguerre_function(1, 2, 0.5) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_symmetry_grid(x):
    for n in range(0, 101, 7):
        for s in range(0, 101, 9):
            a = laguerre_function(n, s, x)
            b = (-1) ** (n - s) * laguerre_function(s, n, x)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_limit_at_zero():
    # I_{s,s}(x) = 1 - (2s+1) x / 2 + O(x^2), so the 1e-7 bound holds for s <= 9
    for s in range(0, 10):
        assert abs(laguerre_function(s, s, 1e-8) - 1.0) < 1e-7
    for s in range(0, 30):
        assert laguerre_function(s, s, 1e-8) == pytest.approx(1.0 - (2 * s + 1) * 0.5e-8, abs=1e-14)
        for sp in range(0, 30):
            if sp != s:
                assert abs(laguerre_function(s, sp, 1e-8)) < 1e-3


def test_fast_path_matches_oracle():
    worst = 0.0
    for x in (1e-3, 1.0, 50.0):
        for n in range(0, 51, 5):
            for s in range(0, 51, 5):
                ref = float(laguerre_function_oracle(n, s, x))
                got = laguerre_function(n, s, x)
                if ref != 0.0:
                    worst = max(worst, abs(got - ref) / abs(ref))
    assert worst < 1e-12


@pytest.mark.parametrize("n,s,x", [(35, 33, 50.0), (120, 100, 87.3), (200, 190, 150.0)])
def test_relative_accuracy_near_roots(n, s, x):
    # step x onto the nearest sign change so the value is far below its envelope
    grid = np.linspace(x - 2.0, x + 2.0, 4001)
    vals = laguerre_function(n, s, grid)
    i = int(np.argmax(np.sign(vals[1:]) != np.sign(vals[:-1])))
    for xi in grid[max(i - 3, 0):i + 4]:
        ref = float(laguerre_function_oracle(n, s, float(xi)))
        assert laguerre_function(n, s, float(xi)) == pytest.approx(ref, rel=1e-12)


def test_oracle_closed_form_to_30_digits():
    val = laguerre_function_oracle(1, 0, 1.0, precision_digits=30)
    with mpmath.workdps(40):
        assert abs(val - mpmath.e ** -0.5) < mpmath.mpf(10) ** -30


def test_oracle_rejects_large_indices():
    with pytest.raises(ValueError):
        laguerre_function_oracle(201, 0, 1.0)


def test_oracle_rejects_nonpositive_precision():
    with pytest.raises(ValueError):
        laguerre_function_oracle(1, 0, 1.0, precision_digits=0)


def test_oracle_signals_unreachable_precision(monkeypatch):
    # a working precision that never changes cannot pass the self-agreement check
    real = mpmath.workdps
    monkeypatch.setattr(mpmath, "workdps", lambda dps: real(8 if dps < 60 else 60))
    with pytest.raises(PrecisionError):
        laguerre_function_oracle(40, 3, 20.0, precision_digits=30)


@pytest.mark.parametrize("l", [-3, 0, 2])
def test_orthonormality(l):
    # radial functions of one orbital number l = n - s form the orthonormal family
    ns = [n for n in range(0, 31, 3) if n - l >= 0]
    for n in ns:
        for n2 in ns:
            if n2 < n:
                continue
            top = 80.0 + 4.0 * max(n, n2)
            val, _ = quad(lambda x: laguerre_function(n, n - l, x) * laguerre_function(n2, n2 - l, x),
                          0.0, top, limit=400, epsabs=1e-13, epsrel=1e-13)
            assert abs(val - (n == n2)) < 1e-10


@given(st.integers(0, 60), st.floats(0.0, 30.0))
@settings(max_examples=60, deadline=None)
def test_completeness_over_second_index(s, x):
    # sum over s' of I_{s,s'}(x)^2 is 1 (unitary displacement)
    total = sum(laguerre_function(s, sp, x) ** 2 for sp in range(0, s + 200))
    assert total == pytest.approx(1.0, abs=1e-10)


@given(st.integers(0, 300), st.integers(0, 300), st.floats(0.0, 400.0))
@settings(max_examples=200, deadline=None)
def test_laguerre_bounded_and_finite(n, s, x):
    v = laguerre_function(n, s, x)
    assert math.isfinite(v)
    assert abs(v) <= 1.0 + 1e-9


def test_large_index_is_finite():
    x = np.array([1e-3, 1.0, 1e3, 4e4])
    v = laguerre_function(10**6, 10**6 - 3, x)
    assert np.all(np.isfinite(v))


def test_vectorized_matches_scalar():
    x = np.linspace(0.0, 20.0, 17)
    vec = laguerre_function(12, 5, x)
    assert vec.shape == x.shape
    for xi, v in zip(x, vec):
        assert v == laguerre_function(12, 5, float(xi))


def test_bessel_asymptotic_of_laguerre():
    errs = []
    for n in (100, 1000, 10000):
        worst = 0.0
        for nu in range(1, 6):
            for xi in np.linspace(0.1, 3.0, 15):
                worst = max(worst, abs(laguerre_function(n, n - nu, xi * xi / (4 * n)) - bessel_j(nu, xi)))
        errs.append(worst)
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


# -- Bessel functions ---------------------------------------------------------

def test_bessel_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    for nu in range(1, 8):
        assert bessel_j(nu, 0.0) == 0.0
    assert bessel_j_prime(1, 0.0) == 0.5


def test_bessel_reference_value():
    assert bessel_j(5, 2.0) == pytest.approx(J5_AT_2, rel=1e-14)
    assert bessel_j(5, 2.0) == pytest.approx(float(bessel_j_oracle(5, 2.0)), rel=1e-14)


@given(st.integers(0, 10_000), st.floats(0.0, 10_000.0))
@settings(max_examples=120, deadline=None)
def test_bessel_matches_mpmath(nu, x):
    ref = float(mpmath.besselj(nu, x, maxprec=60000))
    if abs(ref) < 1e-290:
        return
    scale = abs(float(mpmath.besselj(nu, nu, maxprec=60000)))
    assert bessel_j(nu, x) == pytest.approx(ref, rel=1e-12, abs=1e-12 * scale)


@given(st.integers(1, 500), st.floats(0.01, 800.0))
@settings(max_examples=120, deadline=None)
def test_bessel_derivative_matches_mpmath(nu, x):
    ref = float(mpmath.besselj(nu, x, derivative=1, maxprec=60000))
    scale = max(abs(float(mpmath.besselj(nu - 1, x, maxprec=60000))),
                abs(float(mpmath.besselj(nu + 1, x, maxprec=60000))), 1e-300)
    assert bessel_j_prime(nu, x) == pytest.approx(ref, abs=1e-12 * scale)


@given(st.integers(1, 2000), st.floats(0.1, 3000.0))
@settings(max_examples=80, deadline=None)
def test_bessel_three_term_recurrence(nu, x):
    jm = bessel_j(nu - 1, x)
    jp = bessel_j(nu + 1, x)
    j = bessel_j(nu, x)
    scale = max(abs(jm), abs(jp), abs(2 * nu / x * j), 1e-300)
    assert abs(jm + jp - 2 * nu / x * j) <= 1e-11 * scale


def test_bessel_vectorized():
    x = np.linspace(0.0, 50.0, 101)
    j, jp = bessel_j_and_prime(7, x)
    assert j.shape == x.shape and jp.shape == x.shape
    assert j[10] == bessel_j(7, float(x[10]))


@pytest.mark.parametrize("x", [1e-300, 1e-100, 1e-20, 9.99e-6])
def test_bessel_tiny_argument(x):
    for nu in range(0, 40):
        j, jp = bessel_j_and_prime(nu, x)
        ref = float(mpmath.besselj(nu, x))
        ref_p = float(mpmath.besselj(nu, x, derivative=1))
        assert j == pytest.approx(ref, rel=1e-14, abs=1e-300)
        assert jp == pytest.approx(ref_p, rel=1e-14, abs=1e-300)
