"""Exception hierarchy.

Everything raised on purpose by :mod:`modent` derives from :class:`ModentError`.
Input problems derive from :class:`ValueError` as well, numerical breakdowns
from :class:`NumericalError`.
"""


class ModentError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ModentError, ValueError):
    pass


class SpaceMismatch(ModentError, ValueError):
    """Two objects live in different purified spaces."""


class InvalidSummand(ModentError, ValueError):
    pass


class NormViolation(ModentError, ValueError):
    """The symplectic form is not bounded by the inner product."""


class OddKernel(ModentError, ValueError):
    """ker D has odd dimension and padding was disabled."""


class NotInBaseSpace(ModentError, ValueError):
    pass


class NotIncreasing(ModentError, ValueError):
    pass


class ConfigError(ModentError, ValueError):
    pass


class NumericalError(ModentError, ArithmeticError):
    """A computation could not be carried out to the requested accuracy."""


class DegenerateDecomposition(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class IllConditionedGram(NumericalError):
    pass


class SpectralSingularity(NumericalError):
    pass


class InfiniteComponent(NumericalError):
    """A vector has a component in the nonseparating part."""


class QuadratureFailure(NumericalError):
    pass


class StencilOutOfDomain(NumericalError):
    pass


class InfiniteOnStencil(NumericalError):
    pass


class JumpOnStencil(NumericalError):
    """A finite-difference stencil straddles a jump of the entropy."""
