"""Photon kinematics and transition matrix elements between Landau states.

The photon direction is n = (0, sin(theta), cos(theta)); the transverse
polarization vectors are e1 = x and e2 = (0, cos(theta), -sin(theta)), so
that (e1, e2, n) is right-handed and e_+ = (e1 + i e2)/sqrt(2) is the
right-handed circular polarization.  Cartesian matrix elements of the Dirac
alpha matrices are

    <a1> = i [(c1'c4 + c3'c2) I_{n,n'-1} - (c1 c4' + c3 c2') I_{n-1,n'}] f
    <a2> =   [(c1'c4 + c3'c2) I_{n,n'-1} + (c1 c4' + c3 c2') I_{n-1,n'}] f
    <a3> =   [(c1'c3 + c1 c3') I_{n-1,n'-1} - (c2 c4' + c2'c4) I_{n,n'}] f

with f = I_{s,s'}(x), x = k^2 sin^2(theta) / (4 gamma); all Laguerre
functions take the argument x.  These follow from the overlap identity

    int_0^inf I_{n,s}(r) I_{n',s'}(r) J_{l-l'}(2 sqrt(x r)) dr = I_{n,n'}(x) I_{s,s'}(x)

and the spinor convention documented in :mod:`vortex_sr.electron_states`;
:func:`matrix_elements_quadrature` integrates the explicit spinors directly
and is the independent check.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .electron_states import ElectronState, coefficient_array
from .errors import KinematicDomainError
from .special_fns import laguerre_function

__all__ = [
    "FinalState",
    "PhotonKinematics",
    "TransitionAmplitude",
    "photon_wavenumber",
    "matrix_elements",
    "polarization_matrix",
    "emission_density",
    "matrix_elements_quadrature",
    "parse_polarization",
]


class FinalState(NamedTuple):
    n: int
    s: int
    zeta: int


@dataclass(frozen=True)
class PhotonKinematics:
    """Photon and recoil kinematics for one harmonic, vectorized over theta.

    ``allowed`` is False where the discriminant ``eps`` exceeds 1 (no real
    photon); the other fields are NaN there.
    """

    theta: np.ndarray
    k: np.ndarray
    kz_final: np.ndarray
    x: np.ndarray
    eps: np.ndarray
    beta_par_final: np.ndarray
    K: float
    K_final: np.ndarray
    n_final: int
    allowed: np.ndarray


@dataclass(frozen=True)
class TransitionAmplitude:
    """Cartesian matrix elements ``alpha[0..2]`` (complex, shape (3, ...))."""

    alpha: np.ndarray
    initial: ElectronState
    final: FinalState
    theta: np.ndarray


def parse_polarization(polarization):
    """Map '+', 'right', +1 -> +1 and '-', 'left', -1 -> -1."""
    if polarization in (1, "+", "right", "R"):
        return 1
    if polarization in (-1, "-", "left", "L"):
        return -1
    raise ValueError(f"unknown polarization {polarization!r}")


def photon_wavenumber(initial, n_final, theta, config):
    """Photon wavenumber from energy and z-momentum conservation.

    Uses the cancellation-free root

        k = [4 gamma nu / (K (1 - beta_par cos)) ] / (1 + sqrt(1 - eps)),
        eps = 4 gamma nu sin^2 / (K^2 (1 - beta_par cos)^2),

    with beta_par = k_z / K of the initial state and nu = n - n'.
    """
    nu = initial.n - n_final
    if n_final < 0 or nu < 0:
        raise KinematicDomainError(f"need 0 <= n' <= n, got n={initial.n}, n'={n_final}")
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > math.pi)):
        raise KinematicDomainError("theta must lie in [0, pi]")
    gamma = config.gamma
    K = math.sqrt(1.0 + initial.k_z ** 2 + 4.0 * gamma * initial.n)
    cos = np.cos(theta)
    # exact zero on the axis (float sin(pi) is 1.2e-16)
    sin2 = np.where((theta == 0.0) | (theta == math.pi), 0.0, np.sin(theta) ** 2)
    denom = K - initial.k_z * cos
    eps = 4.0 * gamma * nu * sin2 / denom ** 2
    allowed = eps <= 1.0
    root = np.sqrt(np.where(allowed, 1.0 - eps, np.nan))
    k = 4.0 * gamma * nu / (denom * (1.0 + root))
    kz_final = initial.k_z - k * cos
    K_final = K - k
    return PhotonKinematics(
        theta=theta,
        k=k,
        kz_final=kz_final,
        x=k * k * sin2 / (4.0 * gamma),
        eps=eps,
        beta_par_final=kz_final / K_final,
        K=K,
        K_final=K_final,
        n_final=n_final,
        allowed=allowed,
    )


def _overlaps(n, n_final, x):
    """I_{n,n'-1}, I_{n-1,n'}, I_{n-1,n'-1}, I_{n,n'} at x."""
    return (
        laguerre_function(n, n_final - 1, x),
        laguerre_function(n - 1, n_final, x),
        laguerre_function(n - 1, n_final - 1, x),
        laguerre_function(n, n_final, x),
    )


def _alpha_from(c, cp, overlaps, f):
    i1, i2, i3, i4 = overlaps
    a = cp[0] * c[3] + cp[2] * c[1]
    b = c[0] * cp[3] + c[2] * cp[1]
    alpha = np.empty((3,) + np.shape(f), dtype=complex)
    alpha[0] = 1j * (a * i1 - b * i2) * f
    alpha[1] = (a * i1 + b * i2) * f
    alpha[2] = ((cp[0] * c[2] + c[0] * cp[2]) * i3 - (c[1] * cp[3] + cp[1] * c[3]) * i4) * f
    return alpha


def matrix_elements(initial, final, kin, config):
    """Matrix elements <alpha> for ``initial -> final`` at the angles in `kin`.

    The final longitudinal wavenumber is taken from `kin` (momentum
    conservation); entries where the kinematics is forbidden are zero.
    """
    if kin.n_final != final.n:
        raise KinematicDomainError("kinematics were built for a different n'")
    x = np.where(kin.allowed, kin.x, 0.0)
    c = coefficient_array(initial.n, initial.k_z, initial.zeta, config.gamma)
    cp = coefficient_array(final.n, np.where(kin.allowed, kin.kz_final, 0.0), final.zeta, config.gamma)
    f = laguerre_function(initial.s, final.s, x)
    alpha = _alpha_from(c, cp, _overlaps(initial.n, final.n, x), f)
    alpha = np.where(kin.allowed, alpha, 0.0)
    return TransitionAmplitude(alpha=alpha, initial=initial, final=final, theta=kin.theta)


def polarization_matrix(amp, theta=None):
    """Circular-polarization weights (S_+, S_-).

    ``S_pm = |a1 -+ i (a2 cos - a3 sin)|^2 / 2``, which equals
    ``(|a1|^2 + |a2 cos - a3 sin|^2 -+ i S_par) / 2``.
    """
    if theta is None:
        theta = amp.theta
    a1, a2, a3 = amp.alpha
    t = a2 * np.cos(theta) - a3 * np.sin(theta)
    s_plus = 0.5 * np.abs(a1 - 1j * t) ** 2
    s_minus = 0.5 * np.abs(a1 + 1j * t) ** 2
    return s_plus, s_minus


class EmissionDensity(NamedTuple):
    value: np.ndarray
    allowed: np.ndarray


def emission_density(initial, final, theta, polarization, config):
    """Emission probability per unit time and unit polar angle.

    ``(e0^2/hbar) S_pm k sin(theta) / (1 - beta'_par cos(theta))`` where
    beta'_par = (k_z - k cos) / (K - k) belongs to the final state.
    Forbidden kinematics contribute zero with ``allowed = False``.
    """
    pol = parse_polarization(polarization)
    final = FinalState(*final)
    kin = photon_wavenumber(initial, final.n, theta, config)
    amp = matrix_elements(initial, final, kin, config)
    s_plus, s_minus = polarization_matrix(amp)
    weight = s_plus if pol > 0 else s_minus
    jac = 1.0 - kin.beta_par_final * np.cos(kin.theta)
    value = np.where(kin.allowed, config.e2 * weight * kin.k * np.sin(kin.theta) / jac, 0.0)
    if np.ndim(theta) == 0:
        return EmissionDensity(float(value), bool(kin.allowed))
    return EmissionDensity(value, kin.allowed)


# ---------------------------------------------------------------------------
# Independent check: direct integration over the transverse plane.

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_ALPHA = [np.block([[np.zeros((2, 2)), sg], [sg, np.zeros((2, 2))]]) for sg in _SIGMA]


def _laguerre_direct(n, s, rho):
    if n < 0 or s < 0:
        return np.zeros_like(rho)
    if n < s:
        return (-1) ** (n - s) * _laguerre_direct(s, n, rho)
    m = n - s
    logp = 0.5 * (gammaln(s + 1.0) - gammaln(n + 1.0)) - 0.5 * rho + 0.5 * m * np.log(rho)
    return np.exp(logp) * eval_genlaguerre(s, m, rho)


def _spinor_on_grid(n, s, k_z, zeta, gamma, r, phi):
    """Transverse spinor sqrt(gamma/pi) (...) on a (r, phi) grid, shape (4, len(r), len(phi))."""
    c = coefficient_array(n, k_z, zeta, gamma)
    rho = gamma * r ** 2
    l = n - s
    lower = _laguerre_direct(n - 1, s, rho)[:, None] * np.exp(1j * (l - 1) * phi)[None, :]
    upper = _laguerre_direct(n, s, rho)[:, None] * np.exp(1j * l * phi)[None, :]
    norm = math.sqrt(gamma / math.pi)
    return norm * np.stack([c[0] * lower, 1j * c[1] * upper, c[2] * lower, 1j * c[3] * upper])


def matrix_elements_quadrature(initial, final, theta, config, n_r=240, n_phi=None):
    """<alpha> by direct quadrature of psi'^+ exp(-i k.r) alpha psi over the plane.

    The z-integral is the momentum delta and is taken analytically.  Radial
    integration uses Gauss-Legendre in r, the azimuth uses the trapezoid
    rule (exact for the periodic integrand once `n_phi` exceeds the Bessel
    bandwidth).  Only meant for small quantum numbers.
    """
    final = FinalState(*final)
    theta = float(theta)
    kin = photon_wavenumber(initial, final.n, theta, config)
    if not kin.allowed:
        return np.zeros(3, dtype=complex)
    gamma = config.gamma
    top = max(initial.n, initial.s, final.n, final.s)
    rho_max = 80.0 + 8.0 * top
    r_max = math.sqrt(rho_max / gamma)
    k_perp = float(kin.k) * math.sin(theta)
    if n_phi is None:
        n_phi = 2 * int(k_perp * r_max) + 96
    nodes, weights = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * r_max * (nodes + 1.0)
    wr = 0.5 * r_max * weights * r
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * math.pi / n_phi

    psi = _spinor_on_grid(initial.n, initial.s, initial.k_z, initial.zeta, gamma, r, phi)
    psi_f = _spinor_on_grid(final.n, final.s, float(kin.kz_final), final.zeta, gamma, r, phi)
    wave = np.exp(-1j * k_perp * r[:, None] * np.sin(phi)[None, :])
    out = np.empty(3, dtype=complex)
    for j, a in enumerate(_ALPHA):
        dens = np.einsum("irp,ij,jrp->rp", psi_f.conj(), a, psi) * wave
        out[j] = wphi * np.sum(wr[:, None] * dens)
    return out
