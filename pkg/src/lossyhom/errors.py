"""Exception hierarchy shared across the package."""


class LossyHomError(Exception):
    """Base class for all package errors."""


class InvalidInputError(LossyHomError, ValueError):
    """Raised for non-finite or malformed numeric input."""


class PhysicalityError(LossyHomError, ValueError):
    """Raised when a beamsplitter is not sub-unitary."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DomainError(LossyHomError, ValueError):
    """Raised when an argument lies outside the operation's domain."""


class ParseError(LossyHomError, ValueError):
    """Raised for malformed timestamp streams; carries the record location."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class ConfigurationError(LossyHomError, ValueError):
    """Raised for inconsistent experiment configuration."""
