"""Exception types shared across the package."""


class DoubleRepError(Exception):
    """Base class for all errors raised by this package."""


class SizeLimitError(DoubleRepError):
    """A construction would exceed the configured group-order cap."""


class GroupSpecError(DoubleRepError):
    """A group spec string or generator file could not be parsed."""


class ValidationError(DoubleRepError):
    """A structural invariant failed at construction time."""


class GroupMismatchError(DoubleRepError):
    """Two values that must live over the same group do not."""


class NotACharacterError(DoubleRepError):
    """A class function is not a genuine character (non-integral multiplicities)."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoSuchCharacterError(DoubleRepError):
    """No nonzero virtual character with the requested vanishing exists."""


class ConsistencyError(DoubleRepError):
    """An internal dual-path consistency check failed (indicates a bug)."""


class TheoremViolationError(DoubleRepError):
    """A finite check of one of the verified theorems failed (indicates a bug)."""


class ModularityError(DoubleRepError):
    """Verlinde output is non-integral or negative for allegedly modular data."""


class NotASimpleSectorError(DoubleRepError):
    """Twist detection found zero or several candidate twists."""
