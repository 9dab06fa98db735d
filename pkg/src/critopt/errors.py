"""Exception types shared across the package."""


class CritoptError(Exception):
    """Base class for all package-specific errors."""


class ClosureError(CritoptError):
    """A simplex references a face that is not part of the complex."""


class MonotonicityError(CritoptError):
    """Simplex values violate the face relation (a face exceeds its coface)."""


class EmptyInputError(CritoptError):
    """An input signal or field is empty."""


class InvalidFieldError(CritoptError):
    """A scalar field contains non-finite values or has an inconsistent shape."""


class NotFoundError(CritoptError, KeyError):
    """Unknown simplex id."""


class DimensionError(CritoptError, ValueError):
    """Requested dimension is out of range for the complex."""


class WrongSimplexClassError(CritoptError):
    """The requested move is not defined for the simplex's pairing class."""


class DirectionError(CritoptError, ValueError):
    """Target value lies on the wrong side of the current value."""


class AmbiguityError(CritoptError):
    """A simplex is the moving endpoint of more than one singleton target."""


class NumericalError(CritoptError):
    """Non-finite values encountered during optimization."""


class VerificationError(CritoptError):
    """Randomized cross-check between implementations found a mismatch."""
