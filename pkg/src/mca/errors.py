"""Exception types raised across the package."""


class MCAError(Exception):
    """Base class for all errors raised by :mod:`mca`."""


class InvalidSplit(MCAError, ValueError):
    pass


class DimensionMismatch(MCAError, ValueError):
    pass


class UnsupportedSchemeOrder(MCAError, ValueError):
    pass


class UnknownSystem(MCAError, KeyError):
    pass


class InvalidSystem(MCAError, ValueError):
    """Raised when a system description is not a polynomial right-hand side."""


class NonFinite(MCAError, ArithmeticError):
    """A state value overflowed; ``step`` is the index of the offending step."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SlopeTooLarge(MCAError, ValueError):
    """|G| >= 1/tau: the step is too coarse for a single-digit shift."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class MissingSeriesStates(MCAError, ValueError):
    pass


class ShapeMismatch(MCAError, ValueError):
    pass


class DomainExceeded(MCAError, ValueError):
    pass
