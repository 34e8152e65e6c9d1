"""Angular-momentum flux and radiated power of a Landau electron.

Rates are summed over final states (n', s', zeta') and integrated over the
photon polar angle.  For one harmonic nu = n - n' the photon wavenumber,
the recoil and the Laguerre overlaps in n do not depend on s' or zeta', and
the matrix elements scale as I_{s,s'}(x).  The s' sum therefore reduces to
the two moments

    m0 = sum_s' I_{s,s'}(x)^2,    m1 = sum_s' (s' - s) I_{s,s'}(x)^2,

and each channel carries l - l' = nu + s' - s units of angular momentum.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .electron_states import coefficient_array, kinematics
from .errors import KinematicDomainError
from .quadrature import gauss_kronrod
from .reports import FluxReport, default_harmonic_cap, harmonic_series
from .special_fns import laguerre_function
from .transition import _alpha_from, _overlaps, photon_wavenumber

__all__ = [
    "SPIN_MODES",
    "HarmonicDensity",
    "AngularSpectrum",
    "laguerre_moments",
    "harmonic_density",
    "spectrum_table",
    "angular_momentum_rate",
    "radiated_power",
]

SPIN_MODES = ("average", "fixed")
_MAX_SPREAD = 100_000


class HarmonicDensity(NamedTuple):
    """Densities of one harmonic; rows are polarizations (+, -), columns angles."""

    emission: np.ndarray
    flux: np.ndarray
    power: np.ndarray
    allowed: np.ndarray
    k: np.ndarray


@dataclass
class AngularSpectrum:
    """Per-steradian densities on an angular grid.

    Arrays ``emission``, ``flux`` and ``power`` have shape
    ``(len(harmonics), 2, len(theta))`` with polarization index 0 = "+",
    1 = "-".  ``allowed`` is False where the harmonic is kinematically
    forbidden; the densities there are exact zeros.
    """

    theta: np.ndarray
    harmonics: np.ndarray
    emission: np.ndarray
    flux: np.ndarray
    power: np.ndarray
    allowed: np.ndarray
    spin_mode: str


def laguerre_moments(s, x, tol=1e-14):
    """Truncated sums m0 = sum I_{s,s'}(x)^2 and m1 = sum (s'-s) I_{s,s'}(x)^2.

    s' runs outward from s in both directions and stops once
    ``I_{s,s'}^2 < tol * (running max)`` at every x for three consecutive s'.
    Exactly, m0 = 1 and m1 = x; the truncation error is bounded by the
    neglected squares.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    f = laguerre_function(s, s, x)
    m0 = f * f
    m1 = np.zeros_like(x)
    for step in (1, -1):
        run_max = m0.copy()
        quiet = 0
        sp = s + step
        while 0 <= sp <= s + _MAX_SPREAD and quiet < 3:
            f2 = laguerre_function(s, sp, x) ** 2
            m0 += f2
            m1 += (sp - s) * f2
            run_max = np.maximum(run_max, f2)
            quiet = quiet + 1 if np.all(f2 <= tol * run_max) else 0
            sp += step
    return m0, m1


def _spin_weights(initial, spin_mode):
    if spin_mode == "average":
        return ((1, 0.5), (-1, 0.5))
    if spin_mode == "fixed":
        return ((initial.zeta, 1.0),)
    raise ValueError(f"unknown spin mode {spin_mode!r}; expected one of {SPIN_MODES}")


def _unit_weights(initial, nu, kin, config, spin_mode):
    """Spin-combined (S_+, S_-) with the s' factor I_{s,s'} set to 1."""
    n_final = initial.n - nu
    x = np.where(kin.allowed, kin.x, 0.0)
    kz_final = np.where(kin.allowed, kin.kz_final, 0.0)
    overlaps = _overlaps(initial.n, n_final, x)
    ones = np.ones_like(x)
    cos, sin = np.cos(kin.theta), np.sin(kin.theta)
    s_plus = np.zeros_like(x)
    s_minus = np.zeros_like(x)
    for zeta, w in _spin_weights(initial, spin_mode):
        c = coefficient_array(initial.n, initial.k_z, zeta, config.gamma)
        for zeta_f in (1, -1):
            cp = coefficient_array(n_final, kz_final, zeta_f, config.gamma)
            a1, a2, a3 = _alpha_from(c, cp, overlaps, ones)
            t = a2 * cos - a3 * sin
            s_plus += w * 0.5 * np.abs(a1 - 1j * t) ** 2
            s_minus += w * 0.5 * np.abs(a1 + 1j * t) ** 2
    return s_plus, s_minus


def harmonic_density(initial, nu, theta, config, spin_mode="average", tol=1e-14, per_solid_angle=False):
    """Emission, angular-momentum and power densities of harmonic `nu`.

    Per unit polar angle by default:

        emission = e2 S k sin / (1 - beta'_par cos)
        flux     = sum over channels of (l - l') times the emission
        power    = k times the emission

    With ``per_solid_angle=True`` the factor sin is replaced by 1/(2 pi),
    which keeps the values finite on the axis.  On the axis only nu = 1
    with s' = s radiates; that case skips the s' sweep.
    """
    if spin_mode not in SPIN_MODES:
        raise ValueError(f"unknown spin mode {spin_mode!r}; expected one of {SPIN_MODES}")
    if not 1 <= nu <= initial.n:
        raise KinematicDomainError(f"harmonic {nu} not available from level n={initial.n}")
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    kin = photon_wavenumber(initial, initial.n - nu, theta, config)
    allowed = kin.allowed
    pole = (theta == 0.0) | (theta == math.pi)
    s_plus, s_minus = _unit_weights(initial, nu, kin, config, spin_mode)

    off_axis = allowed & ~pole
    m0 = np.where(pole, 1.0 if nu == 1 else 0.0, 0.0)
    m1 = np.zeros_like(theta)
    if np.any(off_axis):
        m0[off_axis], m1[off_axis] = laguerre_moments(initial.s, kin.x[off_axis], tol)

    k = np.where(allowed, kin.k, 0.0)
    jac = 1.0 - np.where(allowed, kin.beta_par_final, 0.0) * np.cos(theta)
    measure = np.full_like(theta, 1.0 / (2.0 * math.pi)) if per_solid_angle else np.sin(theta)
    base = config.e2 * k * measure / jac
    weights = np.stack([s_plus, s_minus])
    emission = np.where(allowed, weights * base * m0, 0.0)
    flux = np.where(allowed, weights * base * (nu * m0 + m1), 0.0)
    power = emission * k
    return HarmonicDensity(emission, flux, power, allowed, k)


def spectrum_table(initial, config, theta=None, n_theta=181, harmonics=None, spin_mode="average", tol=1e-14):
    """Per-steradian spectrum on an angular grid.

    Parameters
    ----------
    theta : array_like, optional
        Explicit angles in [0, pi]; sorted and de-duplicated.  Defaults to
        `n_theta` equally spaced angles including both poles.
    harmonics : sequence of int, optional
        Harmonics to tabulate; defaults to 1 .. min(n, default cap).
    """
    if theta is None:
        theta = np.linspace(0.0, math.pi, n_theta)
    theta = np.unique(np.asarray(theta, dtype=float))
    if theta.size == 0:
        raise ValueError("angular grid is empty")
    if harmonics is None:
        if initial.n == 0:
            harmonics = []
        else:
            cap = default_harmonic_cap(kinematics(initial, config).beta_perp, initial.n)
            harmonics = range(1, cap + 1)
    harmonics = np.asarray(list(harmonics), dtype=int)
    shape = (harmonics.size, 2, theta.size)
    emission, flux, power = np.zeros(shape), np.zeros(shape), np.zeros(shape)
    allowed = np.zeros((harmonics.size, theta.size), dtype=bool)
    for i, nu in enumerate(harmonics):
        d = harmonic_density(initial, int(nu), theta, config, spin_mode, tol, per_solid_angle=True)
        emission[i], flux[i], power[i], allowed[i] = d.emission, d.flux, d.power, d.allowed
    return AngularSpectrum(theta, harmonics, emission, flux, power, allowed, spin_mode)


def angular_momentum_rate(initial, config, harmonic_max=None, spin_mode="average", tol=1e-8):
    """Rate of angular momentum (z-component) carried off by radiation.

    Harmonics are integrated over (0, pi) with adaptive Gauss-Kronrod and
    added until the geometric tail estimate of the flux is below `tol`
    relative to the total; all n harmonics are summed when the cap reaches
    n.  The returned report also holds the power and emission rates.

    Raises
    ------
    NonConvergenceError
        The harmonic cap was reached with the tail above tolerance.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if spin_mode not in SPIN_MODES:
        raise ValueError(f"unknown spin mode {spin_mode!r}; expected one of {SPIN_MODES}")
    if harmonic_max is None:
        harmonic_max = default_harmonic_cap(kinematics(initial, config).beta_perp, initial.n) if initial.n else 0
    harmonic_max = min(int(harmonic_max), initial.n)
    quad_err = [0.0]
    converged = [True]

    def term(nu):
        def f(t):
            d = harmonic_density(initial, nu, t, config, spin_mode, tol=min(1e-14, tol))
            return np.concatenate([d.flux, d.power, d.emission])

        res = gauss_kronrod(f, 0.0, math.pi, rtol=tol * 1e-2, initial_panels=8)
        quad_err[0] = max(quad_err[0], float(np.max(res.error)))
        converged[0] &= res.converged
        return res.value

    results, tail = harmonic_series(
        term,
        lambda v: abs(v[0]) + abs(v[1]),
        tol,
        harmonic_max,
        exhaustive=harmonic_max == initial.n,
        what="quantum flux",
    )
    vals = np.array(results, dtype=float).reshape(-1, 6)
    return FluxReport(
        harmonics=np.arange(1, len(vals) + 1),
        flux=vals[:, 0:2],
        power=vals[:, 2:4],
        emission=vals[:, 4:6],
        polarizations=("+", "-"),
        tail_estimate=tail,
        converged=converged[0],
        spin_mode=spin_mode,
        channel="quantum",
        quad_error=quad_err[0],
    )


def radiated_power(initial, config, harmonic_max=None, spin_mode="average", tol=1e-8):
    """Radiated power; the same harmonic series as :func:`angular_momentum_rate`."""
    return angular_momentum_rate(initial, config, harmonic_max, spin_mode, tol)
