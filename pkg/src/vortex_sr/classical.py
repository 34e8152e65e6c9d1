"""Classical radiation of an electron on a helix: angular momentum and power.

Natural units with c = 1.  All densities refer to one harmonic nu of the
gyration frequency omega0 and carry the charge squared ``e2``.  Real fields
are ``sum_nu F_nu e^{-i nu omega0 t} + c.c.``, so every quadratic
time-averaged density is ``2 Re(...)`` of the Fourier-component product;
that factor is included throughout.

Three routes to the z-component of the radiated angular momentum are
provided and cross-check each other:

* the hbar -> 0 limit of the quantum rate (``classical_flux_density``),
* the symmetrized energy-momentum tensor (``symmetrized_density``),
* the canonical orbital + spin split built from the field Fourier
  components (``canonical_densities``).

The last two are only available for circular motion (beta_par = 0).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import KinematicDomainError, UnsupportedParameterError
from .quadrature import gauss_kronrod
from .reports import FluxReport, default_harmonic_cap, harmonic_series
from .special_fns import _bessel_triplet, bessel_j_and_prime

__all__ = [
    "ClassicalParams",
    "CanonicalDensities",
    "xi",
    "classical_S_pm",
    "classical_flux_density",
    "classical_flux_total",
    "pole_flux_density",
    "power_density",
    "power_total",
    "symmetrized_density",
    "symmetrized_total",
    "field_fourier_components",
    "canonical_densities",
    "canonical_vectors",
    "canonical_total",
    "poynting_power_density",
    "spin_pole_reference",
]

_QUAD_RTOL = 1e-13


@dataclass(frozen=True)
class ClassicalParams:
    """Helical trajectory: transverse and longitudinal velocity, frequency, charge."""

    beta_perp: float
    beta_par: float = 0.0
    omega0: float = 1.0
    e2: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.beta_perp < 1.0:
            raise KinematicDomainError(f"beta_perp must lie in [0, 1), got {self.beta_perp}")
        if not -1.0 < self.beta_par < 1.0:
            raise KinematicDomainError(f"beta_par must lie in (-1, 1), got {self.beta_par}")
        if self.beta_perp ** 2 + self.beta_par ** 2 >= 1.0:
            raise KinematicDomainError("speed must be below c")
        if not self.omega0 > 0:
            raise KinematicDomainError("omega0 must be positive")

    def require_circular(self):
        if self.beta_par != 0.0:
            raise UnsupportedParameterError("only circular motion (beta_par = 0) is supported here")


class CanonicalDensities(NamedTuple):
    """Orbital and spin parts of the z angular-momentum flux per solid angle."""

    orbital: np.ndarray
    spin: np.ndarray


def _check_nu(nu):
    if int(nu) != nu or nu < 1:
        raise KinematicDomainError(f"harmonic index must be an integer >= 1, got {nu}")
    return int(nu)


def _sign_of_pol(polarization):
    if polarization in (1, "+", "right", "R"):
        return 1.0
    if polarization in (-1, "-", "left", "L"):
        return -1.0
    if polarization in ("sum", None, 0):
        return 0.0
    raise ValueError(f"unknown polarization {polarization!r}")


def xi(p, nu, theta):
    """Bessel argument nu beta_perp sin(theta) / (1 - beta_par cos(theta))."""
    theta = np.asarray(theta, dtype=float)
    return nu * p.beta_perp * np.sin(theta) / (1.0 - p.beta_par * np.cos(theta))


def _bessel_over_sin(p, nu, theta):
    """J_nu(xi), J'_nu(xi) and J_nu(xi)/sin(theta), finite up to the axis.

    ``J/sin = (J_{nu-1} + J_{nu+1}) / (2 nu) * xi/sin`` with
    ``xi/sin = nu beta_perp / (1 - beta_par cos)``; on the axis only nu = 1
    keeps a nonzero ratio.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if np.any((theta < 0) | (theta > math.pi)):
        raise KinematicDomainError("theta must lie in [0, pi]")
    pole = (theta == 0.0) | (theta == math.pi)
    jm1, j, jp1 = _bessel_triplet(nu, np.where(pole, 0.0, xi(p, nu, theta)))
    jprime = 0.5 * (jm1 - jp1)
    over_sin = 0.5 * (jm1 + jp1) * p.beta_perp / (1.0 - p.beta_par * np.cos(theta))
    return theta, j, jprime, over_sin


def _bracket_terms(p, nu, theta):
    """a = beta_perp J'(xi), b = (cos - beta_par)/sin * J(xi), with pole limits.

    At sin(theta) = 0 only nu = 1 survives: J'_1(0) = 1/2 and J_1(xi)/sin
    tends to beta_perp / (2 (1 - beta_par cos)), so b -> +-beta_perp / 2.
    """
    theta, _, jp, over_sin = _bessel_over_sin(p, nu, theta)
    a = p.beta_perp * jp
    b = (np.cos(theta) - p.beta_par) * over_sin
    pole = (theta == 0.0) | (theta == math.pi)
    if np.any(pole):
        # exact: (cos - beta_par) / (1 - beta_par cos) = cos on the axis
        pole_cos = np.where(theta == 0.0, 1.0, -1.0)
        b = np.where(pole, 0.5 * pole_cos * p.beta_perp if nu == 1 else 0.0, b)
    return a, b


def _squeeze(value, theta):
    return float(value[0]) if np.ndim(theta) == 0 else value


def classical_S_pm(p, nu, theta, polarization):
    """Classical-limit polarization weight S_pm = [beta J' +- (cos - beta_par)/sin J]^2 / 2.

    ``polarization="sum"`` returns S_+ + S_-.
    """
    nu = _check_nu(nu)
    a, b = _bracket_terms(p, nu, theta)
    sign = _sign_of_pol(polarization)
    value = a * a + b * b if sign == 0.0 else 0.5 * (a + sign * b) ** 2
    return _squeeze(value, theta)


def classical_flux_density(p, nu, theta, polarization="sum", per_solid_angle=False):
    """Angular-momentum flux of harmonic `nu` per unit polar angle.

    ``(e2 omega0 / 2) nu^2 [bracket]^2 sin / (1 - beta_par cos)^2``.  With
    ``per_solid_angle=True`` the value is divided by 2 pi sin(theta), which is
    finite on the axis.
    """
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    s = np.atleast_1d(classical_S_pm(p, nu, theta_arr, polarization))
    doppler = (1.0 - p.beta_par * np.cos(theta_arr)) ** 2
    measure = 1.0 / (2.0 * math.pi) if per_solid_angle else np.sin(theta_arr)
    value = p.e2 * p.omega0 * nu * nu * s * measure / doppler
    return _squeeze(value, theta)


def pole_flux_density(p, theta, polarization):
    """Closed-form on-axis flux per solid angle (only nu = 1 radiates there).

    ``e2 omega0 beta_perp^2 / (8 pi (1 - beta_par cos)^2) [1 +- (cos - beta_par)/(1 - beta_par cos)]``
    at theta in {0, pi}.
    """
    if theta not in (0.0, math.pi):
        raise KinematicDomainError("pole formula holds only at theta = 0 or pi")
    cos = 1.0 if theta == 0.0 else -1.0
    sign = _sign_of_pol(polarization)
    if sign == 0.0:
        raise ValueError("pole formula is polarization resolved")
    dop = 1.0 - p.beta_par * cos
    return p.e2 * p.omega0 * p.beta_perp ** 2 / (8.0 * math.pi * dop ** 2) * (1.0 + sign * (cos - p.beta_par) / dop)


def power_density(p, nu, theta, polarization="sum"):
    """Radiated power of harmonic `nu` per unit polar angle.

    Same angular weight as :func:`classical_flux_density` with each photon
    carrying energy nu omega0 / (1 - beta_par cos) instead of nu units of
    angular momentum.  For beta_par = 0 this makes P_nu = omega0 dL_nu/dt.
    """
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    s = np.atleast_1d(classical_S_pm(p, nu, theta_arr, polarization))
    dop = 1.0 - p.beta_par * np.cos(theta_arr)
    value = p.e2 * p.omega0 ** 2 * nu * nu * s * np.sin(theta_arr) / dop ** 3
    return _squeeze(value, theta)


def _integrate(fn, tol):
    res = gauss_kronrod(fn, 0.0, math.pi, rtol=max(tol, _QUAD_RTOL), initial_panels=8)
    return res.value, float(np.max(res.error))


def _check_tol(tol):
    if not tol > 0:
        raise ValueError("tol must be positive")


def classical_flux_total(beta_perp, beta_par=0.0, nu_max=None, tol=1e-10, omega0=1.0, e2=1.0):
    """Angular-momentum flux and power of the classical limit, per polarization.

    Harmonics are added until the geometric tail estimate of the flux falls
    below ``tol`` relative to the running total.
    """
    _check_tol(tol)
    p = ClassicalParams(beta_perp, beta_par, omega0, e2)
    if nu_max is None:
        nu_max = default_harmonic_cap(beta_perp)
    quad_err = [0.0]

    def term(nu):
        def f(t):
            return np.stack([
                classical_flux_density(p, nu, t, "+"),
                classical_flux_density(p, nu, t, "-"),
                power_density(p, nu, t, "+"),
                power_density(p, nu, t, "-"),
            ])

        value, err = _integrate(f, tol * 1e-2)
        quad_err[0] = max(quad_err[0], err)
        return value

    if beta_perp == 0.0:
        results, tail = [], 0.0
    else:
        results, tail = harmonic_series(term, lambda v: v[0] + v[1], tol, nu_max, what="classical flux")
    vals = np.array(results).reshape(-1, 4)
    return FluxReport(
        harmonics=np.arange(1, len(vals) + 1),
        flux=vals[:, :2],
        power=vals[:, 2:],
        polarizations=("+", "-"),
        tail_estimate=tail,
        converged=True,
        channel="classical-limit",
        quad_error=quad_err[0],
    )


def power_total(beta_perp, beta_par=0.0, nu_max=None, tol=1e-10, omega0=1.0, e2=1.0):
    """Total classical power; same series as :func:`classical_flux_total`."""
    return classical_flux_total(beta_perp, beta_par, nu_max, tol, omega0, e2)


def symmetrized_density(p, nu, theta):
    """Angular-momentum flux per solid angle from the symmetrized tensor.

    ``(e2 omega0 beta sin / 2 pi) nu {xi [J'^2 + cot^2 J^2] + J J'}``,
    circular motion only.  Vanishes on the axis.
    """
    p.require_circular()
    nu = _check_nu(nu)
    theta_arr, j, jp, over_sin = _bessel_over_sin(p, nu, theta)
    sin = np.sin(theta_arr)
    cos = np.cos(theta_arr)
    x = xi(p, nu, theta_arr)
    # sin * {xi [J'^2 + cot^2 J^2] + J J'} with every 1/sin absorbed in J/sin
    core = x * sin * jp * jp + x * cos * cos * over_sin * j + sin * j * jp
    core = np.where((theta_arr == 0.0) | (theta_arr == math.pi), 0.0, core)
    value = p.e2 * p.omega0 * p.beta_perp / (2.0 * math.pi) * nu * core
    return _squeeze(value, theta)


def _circular_series(density, beta, nu_max, tol, omega0, e2, channel):
    _check_tol(tol)
    p = ClassicalParams(beta, 0.0, omega0, e2)
    if nu_max is None:
        nu_max = default_harmonic_cap(beta)
    quad_err = [0.0]

    def term(nu):
        value, err = _integrate(lambda t: 2.0 * math.pi * np.sin(t) * density(p, nu, t), tol * 1e-2)
        quad_err[0] = max(quad_err[0], err)
        return float(value)

    if beta == 0.0:
        results, tail = [], 0.0
    else:
        results, tail = harmonic_series(term, abs, tol, nu_max, what=channel)
    vals = np.array(results, dtype=float).reshape(-1, 1)
    return FluxReport(
        harmonics=np.arange(1, len(vals) + 1),
        flux=vals,
        polarizations=("sum",),
        tail_estimate=tail,
        channel=channel,
        quad_error=quad_err[0],
    )


def symmetrized_total(beta, nu_max=None, tol=1e-10, omega0=1.0, e2=1.0):
    """Solid-angle integral of :func:`symmetrized_density`, per harmonic."""
    return _circular_series(symmetrized_density, beta, nu_max, tol, omega0, e2, "symmetrized")


def field_fourier_components(p, nu, theta, r=1.0, phi=0.0, coulomb_gauge=True):
    """Wave-zone Fourier components of A and E for harmonic `nu`.

    Spherical components (r, theta, phi) to first order in 1/r, with
    B = e exp(i(k r + nu phi - nu pi/2)) and k = nu omega0:

        A = (B/r) (J, cot J, i beta J'),   E = (B nu omega0 / r) (0, i cot J, -beta J').

    In the Coulomb gauge the radial potential component is dropped.
    Returns ``(A, E)``, complex arrays of shape ``(3,) + shape(theta)``.
    """
    p.require_circular()
    nu = _check_nu(nu)
    theta = np.asarray(theta, dtype=float)
    sin = np.sin(theta)
    if np.any((theta <= 0.0) | (theta >= math.pi)):
        raise KinematicDomainError("field components are singular on the axis; use theta in (0, pi)")
    j, jp = bessel_j_and_prime(nu, xi(p, nu, theta))
    cot = np.cos(theta) / sin
    k = nu * p.omega0
    big_b = math.sqrt(p.e2) * np.exp(1j * (k * r + nu * phi - nu * math.pi / 2.0))
    a_r = np.zeros_like(j) if coulomb_gauge else big_b * j / r
    A = np.array([a_r, big_b * cot * j / r, 1j * p.beta_perp * big_b * jp / r], dtype=complex)
    E = np.array([np.zeros_like(j), 1j * k * big_b * cot * j / r, -k * p.beta_perp * big_b * jp / r], dtype=complex)
    return A, E


def canonical_densities(p, nu, theta):
    """Orbital and spin z angular-momentum flux per solid angle (r^2 scaled).

    ``L = (e2 nu^2 omega0 / 2 pi)[beta^2 J'^2 + cot^2 J^2 - (2 beta/nu)(cos^2/sin) J' J]``
    ``S = (e2 nu omega0 beta / pi)(cos^2/sin) J' J``

    On the axis L -> 0 and S -> e2 omega0 beta^2 / (4 pi) for nu = 1 (zero
    otherwise).  Their sum equals the polarization-summed classical-limit
    density per solid angle at every theta.
    """
    p.require_circular()
    nu = _check_nu(nu)
    theta_arr, j, jp, over_sin = _bessel_over_sin(p, nu, theta)
    beta = p.beta_perp
    cos2 = np.cos(theta_arr) ** 2
    cross = cos2 * jp * over_sin
    pref = p.e2 * p.omega0 / math.pi
    orbital = 0.5 * pref * nu * nu * (beta * beta * jp * jp + cos2 * over_sin ** 2 - 2.0 * beta / nu * cross)
    spin = pref * nu * beta * cross
    pole = (theta_arr == 0.0) | (theta_arr == math.pi)
    if np.any(pole):
        # the bracket cancels exactly on the axis; rounding would leave ~1e-17
        orbital = np.where(pole, 0.0, orbital)
        spin = np.where(pole, 0.25 * pref * beta * beta if nu == 1 else 0.0, spin)
    return CanonicalDensities(_squeeze(orbital, theta), _squeeze(spin, theta))


def spin_pole_reference(p):
    """Reference on-axis spin density e2 omega0 beta^2 / (8 pi) for the acceptance check.

    Kept separate from :func:`canonical_densities`, whose normalization is
    fixed by the requirement that orbital + spin reproduce the
    classical-limit flux; the two differ by exactly a factor 2.
    """
    return p.e2 * p.omega0 * p.beta_perp ** 2 / (8.0 * math.pi)


def _spherical_basis(theta, phi):
    st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
    r_hat = np.array([st * cp, st * sp, ct])
    t_hat = np.array([ct * cp, ct * sp, -st])
    p_hat = np.array([-sp, cp, 0.0])
    return r_hat, t_hat, p_hat


def _cartesian_potential(p, nu, point):
    x, y, z = point
    r = math.sqrt(x * x + y * y + z * z)
    theta = math.acos(z / r)
    phi = math.atan2(y, x)
    A, E = field_fourier_components(p, nu, np.array([theta]), r=r, phi=phi)
    basis = _spherical_basis(theta, phi)
    a_cart = sum(A[i][0] * basis[i] for i in range(3))
    e_cart = sum(E[i][0] * basis[i] for i in range(3))
    return a_cart, e_cart


def canonical_vectors(p, nu, theta, phi=0.3, r=3.0, rel_step=1e-5):
    """Orbital and spin flux vectors per solid angle by finite differences.

    Builds Cartesian A and E from :func:`field_fourier_components`, applies
    ``(r x grad)`` numerically and returns

        orbital = (r^2 / 2 pi) Re sum_i E_i^* (r x grad) A_i
        spin    = (r^2 / 2 pi) Re (E^* x A).

    Independent of the closed forms in :func:`canonical_densities`; the
    orbital vector is tangential and the spin vector radial.  The radius
    only sets the 1/r scale; a small one keeps exp(ikr) resolved by the
    difference step.
    """
    theta = float(theta)
    r_hat, _, _ = _spherical_basis(theta, phi)
    point = r * r_hat
    a0, e0 = _cartesian_potential(p, nu, point)
    h = rel_step * r
    grad = np.empty((3, 3), dtype=complex)  # grad[l, i] = d A_i / d x_l
    for l in range(3):
        dp = np.zeros(3)
        dp[l] = h
        ap, _ = _cartesian_potential(p, nu, point + dp)
        am, _ = _cartesian_potential(p, nu, point - dp)
        grad[l] = (ap - am) / (2.0 * h)
    # (r x grad)_j A_i = eps_{jkl} x_k d_l A_i
    ang = np.empty((3, 3), dtype=complex)
    for j in range(3):
        k, l = (j + 1) % 3, (j + 2) % 3
        ang[j] = point[k] * grad[l] - point[l] * grad[k]
    orbital = r * r / (2.0 * math.pi) * np.real(ang @ np.conj(e0))
    spin = r * r / (2.0 * math.pi) * np.real(np.cross(np.conj(e0), a0))
    return orbital, spin


def _canonical_sum(p, nu, theta):
    d = canonical_densities(p, nu, theta)
    return d.orbital + d.spin


def canonical_total(beta, nu_max=None, tol=1e-10, omega0=1.0, e2=1.0):
    """Total canonical flux ``e2 omega0 sum nu^2 int [beta^2 J'^2 + cot^2 J^2] sin dtheta``.

    Integrates the orbital + spin density over the solid angle; the J'J
    cross terms cancel pointwise.
    """
    return _circular_series(_canonical_sum, beta, nu_max, tol, omega0, e2, "canonical")


def poynting_power_density(p, nu, theta):
    """Power of harmonic `nu` per unit polar angle from |E|^2 of the wave-zone field.

    ``2 pi sin * (r^2 / 2 pi) |E_nu|^2``; an independent route to the
    radiated power for circular motion.
    """
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    _, E = field_fourier_components(p, nu, theta_arr)
    value = np.sin(theta_arr) * np.sum(np.abs(E) ** 2, axis=0)
    return _squeeze(value, theta)
