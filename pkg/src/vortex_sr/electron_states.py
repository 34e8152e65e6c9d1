"""Landau states of a Dirac electron in a uniform magnetic field.

Everything is computed in natural units, hbar = c = m = 1, so wavenumbers
and energies are measured in units of the inverse Compton wavelength
k0 = mc/hbar and of mc^2.  The field enters through ``b = H / H_c`` with
the critical field ``H_c = m^2 c^3 / (e0 hbar)``, which gives
``gamma = e0 H / (2 c hbar) = b / 2`` and the gyration frequency
``omega0 = e0 H c / E = b / E``.

Spinor convention
-----------------
The transverse spinor of state ``|n, s, k_z, zeta>`` is

    (c1 e^{i(l-1)phi} I_{n-1,s},  i c2 e^{il phi} I_{n,s},
     c3 e^{i(l-1)phi} I_{n-1,s},  i c4 e^{il phi} I_{n,s}),   l = n - s,

with real c_i built from A+-, B+-.  The factor ``i`` on the second and
fourth components is what makes the real c_i solve the Dirac equation for
e = -e0 and H along +z.

At n = 0 only zeta = -1 is a physical state: for zeta = +1 the coefficients
c2 = c4 = 0 multiply the only non-vanishing functions, so the spinor is
identically zero.  This is not rejected; such a state simply never
contributes to a transition.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import constants

from .errors import KinematicDomainError

__all__ = [
    "FINE_STRUCTURE",
    "FieldConfig",
    "ElectronState",
    "Kinematics",
    "SpinCoefficients",
    "energy",
    "kinematics",
    "spin_coefficients",
    "coefficient_array",
    "field_for_beta_perp",
]

FINE_STRUCTURE = constants.fine_structure


@dataclass(frozen=True)
class FieldConfig:
    """Magnetic field and unit conventions.

    Parameters
    ----------
    b : float
        Field strength in units of the critical field H_c.
    unit_system : str
        Tag for output conversion, ``"natural"`` or ``"si"``.  Internal
        arithmetic is always natural.
    e2 : float
        Charge squared e0^2 in units of hbar c (the fine-structure constant
        by default).
    """

    b: float
    unit_system: str = "natural"
    e2: float = FINE_STRUCTURE

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"field strength b must be > 0, got {self.b}")
        if self.unit_system not in ("natural", "si"):
            raise ValueError(f"unknown unit system {self.unit_system!r}")

    @property
    def gamma(self):
        return 0.5 * self.b

    @property
    def k0(self):
        return 1.0

    def omega0(self, energy):
        """Gyration frequency e0 H c / E for an electron of energy `energy`."""
        return self.b / energy

    def unit_scales(self):
        """SI values of the natural units (multiply a natural quantity by these)."""
        lam = constants.hbar / (constants.m_e * constants.c)
        return {
            "length_m": lam,
            "time_s": lam / constants.c,
            "energy_J": constants.m_e * constants.c ** 2,
            "field_T": self.b * constants.m_e ** 2 * constants.c ** 2 / (constants.e * constants.hbar),
            "angular_momentum_Js": constants.hbar,
        }


@dataclass(frozen=True)
class ElectronState:
    """Quantum numbers of a Landau state.

    ``n`` principal number, ``s`` radial number, ``k_z`` longitudinal
    wavenumber (units of k0), ``zeta`` spin number +1 / -1.  The orbital
    number is ``l = n - s`` and may be negative.
    """

    n: int
    s: int
    k_z: float = 0.0
    zeta: int = 1

    def __post_init__(self):
        if self.n < 0 or self.s < 0:
            raise ValueError(f"need n >= 0 and s >= 0, got n={self.n}, s={self.s}")
        if self.zeta not in (1, -1):
            raise ValueError(f"zeta must be +1 or -1, got {self.zeta}")

    @property
    def l(self):
        return self.n - self.s


class Kinematics(NamedTuple):
    K: float
    beta_perp: float
    beta_par: float


@dataclass(frozen=True)
class SpinCoefficients:
    c: np.ndarray = field(repr=False)
    A_plus: float
    A_minus: float
    B_plus: float
    B_minus: float
    K: float
    K0: float

    @property
    def spinor_factors(self):
        """Complex weights (c1, i c2, c3, i c4) of the four spinor components."""
        return self.c * np.array([1, 1j, 1, 1j])


def _energy(n, k_z, gamma):
    return np.sqrt(1.0 + np.square(k_z) + 4.0 * gamma * n)


def energy(state, config):
    """Energy E = sqrt(m^2c^4 + c^2 hbar^2 (k_z^2 + 4 gamma n)) in units of mc^2."""
    return float(_energy(state.n, state.k_z, config.gamma))


def kinematics(state, config):
    """K = E / (c hbar), beta_perp = 2 c hbar sqrt(gamma n) / E, beta_par = k_z / K."""
    K = energy(state, config)
    return Kinematics(K, 2.0 * math.sqrt(config.gamma * state.n) / K, state.k_z / K)


def coefficient_array(n, k_z, zeta, gamma):
    """Spin coefficients c_1..c_4, vectorized over `k_z`.

    Returns an array of shape ``(4,) + shape(k_z)``.
    """
    k_z = np.asarray(k_z, dtype=float)
    K = _energy(n, k_z, gamma)
    K0 = np.sqrt(1.0 + 4.0 * gamma * n)
    a_plus = np.sqrt(1.0 + k_z / K)
    a_minus = zeta * np.sqrt(1.0 - k_z / K)
    b_plus = math.sqrt(max(0.0, 1.0 + zeta / K0))
    b_minus = zeta * math.sqrt(max(0.0, 1.0 - zeta / K0))
    r = 2.0 * math.sqrt(2.0)
    return np.array([
        b_plus * (a_plus + a_minus),
        b_minus * (a_minus - a_plus),
        b_plus * (a_plus - a_minus),
        b_minus * (a_plus + a_minus),
    ]) / r


def spin_coefficients(state, config):
    """Spin-polarization coefficients c_i of `state`.

    Raises
    ------
    KinematicDomainError
        If K0 = sqrt(K^2 - k_z^2) falls below k0 (cannot happen for a valid
        state; guards the square roots).
    """
    K = energy(state, config)
    # sqrt(K^2 - k_z^2) formed directly; differencing can drop below 1 at n = 0
    K0 = math.sqrt(1.0 + 4.0 * config.gamma * state.n)
    if K0 < 1.0 - 1e-12:
        raise KinematicDomainError(f"K0={K0} < k0 for {state}")
    zeta = state.zeta
    c = coefficient_array(state.n, state.k_z, zeta, config.gamma)
    return SpinCoefficients(
        c=c,
        A_plus=math.sqrt(1.0 + state.k_z / K),
        A_minus=zeta * math.sqrt(1.0 - state.k_z / K),
        B_plus=math.sqrt(max(0.0, 1.0 + zeta / K0)),
        B_minus=zeta * math.sqrt(max(0.0, 1.0 - zeta / K0)),
        K=K,
        K0=K0,
    )


def field_for_beta_perp(n, beta_perp, k_z=0.0):
    """Field b that gives transverse velocity `beta_perp` to level `n`."""
    if n < 1 or not 0 < beta_perp < 1:
        raise ValueError("need n >= 1 and 0 < beta_perp < 1")
    return beta_perp ** 2 * (1.0 + k_z ** 2) / (2.0 * n * (1.0 - beta_perp ** 2))
