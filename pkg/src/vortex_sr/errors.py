"""Exception types raised by vortex_sr."""


class VortexSRError(Exception):
    """Base class for all library errors."""


class KinematicDomainError(VortexSRError, ValueError):
    """Quantum numbers or angles outside the domain of an operation."""


class UnsupportedParameterError(VortexSRError, ValueError):
    """Parameters for which a formula is not available (e.g. beta_par != 0)."""


class PrecisionError(VortexSRError, ArithmeticError):
    """The arbitrary-precision oracle could not reach the requested digits."""


class NonConvergenceError(VortexSRError, ArithmeticError):
    """A harmonic sum or a quadrature did not reach the requested tolerance.

    Attributes
    ----------
    tail_estimate : float
        Estimated size of the neglected remainder (absolute).
    total : float
        Partial result accumulated before giving up.
    """

    def __init__(self, message, tail_estimate=float("nan"), total=float("nan")):
        super().__init__(message)
        self.tail_estimate = tail_estimate
        self.total = total
