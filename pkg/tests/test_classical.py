import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from vortex_sr.classical import (
    ClassicalParams,
    canonical_densities,
    canonical_total,
    canonical_vectors,
    classical_flux_density,
    classical_flux_total,
    classical_S_pm,
    field_fourier_components,
    pole_flux_density,
    power_density,
    poynting_power_density,
    spin_pole_reference,
    symmetrized_density,
    symmetrized_total,
)
from vortex_sr.errors import KinematicDomainError, UnsupportedParameterError

# mpmath at 30 digits, beta = 0.6, theta = pi/2, e2 = omega0 = 1
SYM_EQUATOR = {1: 0.022687125926747925313, 2: 0.0194929692052777424, 3: 0.01432521247226546876}


def _sym_equator_mp(beta, nu):
    with mpmath.workdps(30):
        x = nu * mpmath.mpf(beta)
        j = mpmath.besselj(nu, x)
        jp = mpmath.besselj(nu, x, derivative=1)
        return float(beta / (2 * mpmath.pi) * nu * (x * jp ** 2 + j * jp))


def test_params_validation():
    with pytest.raises(KinematicDomainError):
        ClassicalParams(1.0)
    with pytest.raises(KinematicDomainError):
        ClassicalParams(0.8, 0.7)
    with pytest.raises(KinematicDomainError):
        ClassicalParams(0.5, omega0=0.0)


def test_equator_has_equal_polarizations():
    p = ClassicalParams(0.7)
    for nu in (1, 2, 5):
        assert classical_S_pm(p, nu, math.pi / 2, "+") == pytest.approx(classical_S_pm(p, nu, math.pi / 2, "-"), rel=1e-15)


def test_forward_axis_is_right_handed():
    p = ClassicalParams(0.4, 0.2)
    assert classical_S_pm(p, 1, 0.0, "-") == 0.0
    assert classical_S_pm(p, 1, 0.0, "+") == pytest.approx(0.5 * 0.4 ** 2, rel=1e-15)
    assert classical_S_pm(p, 1, math.pi, "+") == 0.0
    for nu in (2, 3):
        assert classical_S_pm(p, nu, 0.0, "sum") == 0.0


def test_first_harmonic_bracket():
    p = ClassicalParams(0.5)
    t = 0.9
    x = 0.5 * math.sin(t)
    jp = float(mpmath.besselj(1, x, derivative=1))
    j = float(mpmath.besselj(1, x))
    ref = 0.5 * (0.5 * jp + math.cos(t) / math.sin(t) * j) ** 2
    assert classical_S_pm(p, 1, t, "+") == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("beta_par", [0.0, 0.3, -0.5])
def test_pole_formula_matches_density(beta_par):
    p = ClassicalParams(0.6, beta_par, omega0=1.7, e2=0.3)
    for theta in (0.0, math.pi):
        for pol in "+-":
            d = classical_flux_density(p, 1, theta, pol, per_solid_angle=True)
            assert pole_flux_density(p, theta, pol) == pytest.approx(d, rel=1e-14, abs=1e-300)
    # approach from inside
    near = classical_flux_density(p, 1, 1e-6, "+", per_solid_angle=True)
    assert near == pytest.approx(pole_flux_density(p, 0.0, "+"), rel=1e-9)
    with pytest.raises(KinematicDomainError):
        pole_flux_density(p, 0.5, "+")


@given(st.floats(0.01, 0.95), st.integers(1, 30), st.floats(0.0, math.pi))
@settings(max_examples=100, deadline=None)
def test_densities_non_negative(beta, nu, theta):
    p = ClassicalParams(beta)
    assert classical_flux_density(p, nu, theta, "+") >= 0.0
    assert classical_flux_density(p, nu, theta, "-") >= 0.0
    assert power_density(p, nu, theta) >= 0.0


@given(st.floats(0.05, 0.95), st.integers(1, 30), st.floats(0.01, math.pi - 0.01))
@settings(max_examples=100, deadline=None)
def test_canonical_split_reproduces_limit_density(beta, nu, theta):
    p = ClassicalParams(beta, omega0=2.0, e2=0.5)
    d = canonical_densities(p, nu, theta)
    ref = classical_flux_density(p, nu, theta, "sum", per_solid_angle=True)
    assert d.orbital + d.spin == pytest.approx(ref, rel=1e-11, abs=1e-15 * p.e2 * p.omega0)


def test_power_equals_omega0_times_flux_for_circular_motion():
    p = ClassicalParams(0.8, omega0=1.3)
    t = np.linspace(0.0, math.pi, 11)
    for nu in (1, 4):
        assert np.allclose(power_density(p, nu, t), p.omega0 * classical_flux_density(p, nu, t), rtol=1e-14, atol=0)


def test_symmetrized_frozen_values():
    p = ClassicalParams(0.6)
    for nu, ref in SYM_EQUATOR.items():
        assert symmetrized_density(p, nu, math.pi / 2) == pytest.approx(ref, rel=1e-13)
        assert ref == pytest.approx(_sym_equator_mp(0.6, nu), rel=1e-15)


def test_symmetrized_vanishes_on_axis_and_at_rest():
    p = ClassicalParams(0.5)
    assert symmetrized_density(p, 1, 0.0) == 0.0
    assert symmetrized_density(p, 1, math.pi) == 0.0
    assert np.all(symmetrized_density(ClassicalParams(0.0), 3, np.linspace(0, math.pi, 5)) == 0.0)
    assert symmetrized_total(0.0).total_flux == 0.0


def test_circular_only_routes_reject_helix():
    p = ClassicalParams(0.5, 0.1)
    with pytest.raises(UnsupportedParameterError):
        symmetrized_density(p, 1, 1.0)
    with pytest.raises(UnsupportedParameterError):
        canonical_densities(p, 1, 1.0)
    with pytest.raises(UnsupportedParameterError):
        field_fourier_components(p, 1, 1.0)


def test_bad_harmonic_and_angle():
    p = ClassicalParams(0.5)
    with pytest.raises(KinematicDomainError):
        classical_flux_density(p, 0, 1.0)
    with pytest.raises(KinematicDomainError):
        classical_flux_density(p, 1, 4.0)
    with pytest.raises(ValueError):
        classical_S_pm(p, 1, 1.0, "up")


def test_symmetrized_and_canonical_totals_agree_per_harmonic():
    for beta in (0.3, 0.6):
        sym = symmetrized_total(beta, tol=1e-12)
        can = canonical_total(beta, tol=1e-12)
        n = min(len(sym.harmonics), len(can.harmonics))
        assert np.allclose(sym.flux[:n, 0], can.flux[:n, 0], rtol=1e-11, atol=0)
        assert sym.total_flux == pytest.approx(can.total_flux, rel=1e-10)


def test_symmetrized_total_matches_limit_series():
    beta = 0.6
    sym = symmetrized_total(beta, tol=1e-12)
    lim = classical_flux_total(beta, tol=1e-12)
    assert sym.total_flux == pytest.approx(lim.total_flux, rel=1e-10)


def test_small_speed_total_is_larmor():
    beta = 0.01
    rep = classical_flux_total(beta, tol=1e-12, omega0=2.0, e2=0.5)
    assert rep.total_flux == pytest.approx(2.0 / 3.0 * 0.5 * 2.0 * beta ** 2, rel=1e-3)
    assert rep.total_power == pytest.approx(2.0 * rep.total_flux, rel=1e-12)


def test_helix_power_exceeds_omega0_flux():
    rep = classical_flux_total(0.5, 0.4, tol=1e-10)
    assert rep.total_power > rep.total_flux


def test_spin_pole_constant_is_half_of_axis_limit():
    p = ClassicalParams(0.7, omega0=1.5, e2=0.2)
    d = canonical_densities(p, 1, 0.0)
    assert d.orbital == 0.0
    assert d.spin == pytest.approx(2.0 * spin_pole_reference(p), rel=1e-15)
    near = canonical_densities(p, 1, 1e-5)
    assert near.spin == pytest.approx(d.spin, rel=1e-8)


def test_fields_are_transverse():
    p = ClassicalParams(0.7)
    A, E = field_fourier_components(p, 3, np.linspace(0.1, 3.0, 7), r=10.0)
    assert np.all(A[0] == 0) and np.all(E[0] == 0)
    A_full, _ = field_fourier_components(p, 3, np.linspace(0.1, 3.0, 7), r=10.0, coulomb_gauge=False)
    assert np.all(A_full[0] != 0)
    with pytest.raises(KinematicDomainError):
        field_fourier_components(p, 3, 0.0)


@pytest.mark.parametrize("theta", [0.4, 1.1, 2.5])
def test_finite_difference_vectors_match_closed_forms(theta):
    p = ClassicalParams(0.6)
    orb, spin = canonical_vectors(p, 2, theta)
    d = canonical_densities(p, 2, theta)
    r_hat = np.array([math.sin(theta) * math.cos(0.3), math.sin(theta) * math.sin(0.3), math.cos(theta)])
    assert orb[2] == pytest.approx(d.orbital, rel=1e-7)
    assert spin[2] == pytest.approx(d.spin, rel=1e-12)
    scale = abs(d.orbital) + abs(d.spin)
    assert abs(orb @ r_hat) < 1e-12 * scale
    assert np.linalg.norm(np.cross(spin, r_hat)) < 1e-12 * scale


@pytest.mark.parametrize("nu", [1, 3, 10])
def test_poynting_power_matches_limit(nu):
    p = ClassicalParams(0.8, omega0=1.2)
    a, _ = quad(lambda t: poynting_power_density(p, nu, t), 1e-12, math.pi - 1e-12, epsrel=1e-12, limit=200)
    b, _ = quad(lambda t: power_density(p, nu, t), 0.0, math.pi, epsrel=1e-12, limit=200)
    assert a == pytest.approx(b, rel=1e-10)


@given(st.floats(0.01, 0.95), st.integers(1, 20),
       st.one_of(st.floats(0.0, 1e-6), st.floats(math.pi - 1e-6, math.pi)))
@settings(max_examples=100, deadline=None)
def test_near_axis_densities_are_finite(beta, nu, theta):
    p = ClassicalParams(beta)
    d = canonical_densities(p, nu, theta)
    values = [d.orbital, d.spin, symmetrized_density(p, nu, theta), classical_flux_density(p, nu, theta, "+", True)]
    assert all(math.isfinite(v) for v in values)
    axis = canonical_densities(p, nu, 0.0)
    assert d.orbital + d.spin == pytest.approx(axis.orbital + axis.spin, rel=1e-5, abs=1e-12)
