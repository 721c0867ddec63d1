"""Exception types raised by the numerical kernels."""


class EfimovError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EfimovError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class NoBoundStateError(DomainError):
    """The antisymmetric two-center level does not exist (rho < 1)."""


class SubThresholdError(DomainError):
    """Mass ratio too small for a real channel exponent s0."""


class SingularityError(DomainError):
    """Evaluation point coincides with a zero-range well center."""


class PoleError(EfimovError, ArithmeticError):
    """The scattering length diverges (lossless Efimov resonance)."""


class StiffnessError(EfimovError, ArithmeticError):
    """The adaptive integrator could not make progress."""


class TailNotConvergedError(EfimovError, ArithmeticError):
    """The effective potential has not decayed at the outer radius."""


class NumericalError(EfimovError, ArithmeticError):
    """Quadrature or maximization failed to converge."""
