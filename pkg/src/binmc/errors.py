"""Exception types shared across the package."""


class BinmcError(Exception):
    """Base class for all package errors."""


class RingError(BinmcError):
    """Bad ring descriptor or an operation unsupported over the ring."""


class ShapeError(BinmcError):
    """Dimension or shape mismatch between operands."""


class IllDefinedMorphism(BinmcError):
    """Matrix does not send relations into relations."""


class NotAcyclic(BinmcError):
    """An operation required an acyclic input and verification failed."""


class NotDiagonal(BinmcError):
    """An operation required a diagonal direction that is not present."""


class MembershipRefusal(BinmcError):
    """Cofinality machinery refused an input (e.g. unequal relative classes)."""


class CertificateError(BinmcError):
    """A supplied certificate does not verify."""


class ParseError(BinmcError):
    """Malformed input document.  Carries a human-readable location."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
