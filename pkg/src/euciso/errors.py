"""Exception types shared across the package."""


class EucisoError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(EucisoError):
    pass


class NotAMember(EucisoError):
    """Element cannot be factored as t(n)*f*p over the given group."""


class BadModulus(EucisoError):
    """Quotient modulus N is not a multiple of m0."""


class NotCoprime(EucisoError):
    pass


class IntegralityViolation(EucisoError):
    """A cocycle value left the translation lattice."""


class InternalInconsistency(EucisoError):
    """A structural guarantee failed; indicates an invalid spec or a bug."""


class CapExceeded(EucisoError):
    """Group order exceeds the solver cap."""


class ConvergenceFailure(EucisoError):
    """Random-commutant solver failed after the retry budget."""


class IncompatibleShapes(EucisoError):
    pass


class IncompleteTable(EucisoError):
    """Fourier table is missing entries required for inversion."""
