"""Angular momentum carried by synchrotron radiation of a Landau electron.

Exact quantum emission rates between Landau states, their classical limit,
and the classical symmetrized and canonical angular-momentum fluxes.
"""

from .classical import (
    CanonicalDensities,
    ClassicalParams,
    canonical_densities,
    canonical_total,
    classical_flux_density,
    classical_flux_total,
    classical_S_pm,
    field_fourier_components,
    pole_flux_density,
    power_density,
    power_total,
    symmetrized_density,
    symmetrized_total,
)
from .electron_states import (
    ElectronState,
    FieldConfig,
    coefficient_array,
    energy,
    field_for_beta_perp,
    kinematics,
    spin_coefficients,
)
from .errors import (
    KinematicDomainError,
    NonConvergenceError,
    PrecisionError,
    UnsupportedParameterError,
    VortexSRError,
)
from .quantum_flux import (
    AngularSpectrum,
    angular_momentum_rate,
    harmonic_density,
    radiated_power,
    spectrum_table,
)
from .reports import FluxReport
from .special_fns import (
    bessel_j,
    bessel_j_and_prime,
    generalized_laguerre,
    laguerre_function,
    laguerre_function_oracle,
)
from .transition import (
    FinalState,
    PhotonKinematics,
    TransitionAmplitude,
    emission_density,
    matrix_elements,
    photon_wavenumber,
    polarization_matrix,
)

__version__ = "0.1.0"
