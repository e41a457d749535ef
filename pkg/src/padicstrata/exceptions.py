"""Exception types shared across the package."""


class PadicStrataError(Exception):
    """Base class for all package-specific errors."""


class PrecisionError(PadicStrataError):
    """A result depends on digits beyond the working precision."""


class ResourceLimitError(PadicStrataError):
    """A configured enumeration or size bound was exceeded."""


class InvalidInputError(PadicStrataError):
    """Input data violates a structural precondition."""


class HypothesisViolationError(InvalidInputError):
    """A module does not satisfy the hypotheses of the normal-form algorithm."""


class FieldTooSmallError(PadicStrataError):
    """No solution exists within the allowed tower of coefficient fields."""

    def __init__(self, message, ladder=()):
        super().__init__(message)
        self.ladder = tuple(ladder)


class ValidityError(PadicStrataError):
    """The Cayley-Hamilton shortcut refused an input outside its guaranteed domain."""
