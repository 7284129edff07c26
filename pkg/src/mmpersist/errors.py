"""Exception types raised across the package."""


class MMPersistError(Exception):
    """Base class for every error raised by mmpersist."""


class MalformedInput(MMPersistError, ValueError):
    pass


class ValueOutOfRange(MMPersistError, ValueError):
    pass


class EmptyImage(MMPersistError, ValueError):
    pass


class DimensionMismatch(MMPersistError, ValueError):
    pass


class LengthMismatch(MMPersistError, ValueError):
    pass


class InvalidIndex(MMPersistError, ValueError):
    pass


class InvalidThresholds(MMPersistError, ValueError):
    pass


class NonNestedSEs(MMPersistError, ValueError):
    pass


class NonMonotoneSequence(MMPersistError, ValueError):
    """A supposedly nested image sequence loses a black pixel.

    ``index`` is the position of the first image that is not contained in its
    successor and ``pixel`` the first offending (x, y) coordinate.
    """

    def __init__(self, message, index=None, pixel=None):
        super().__init__(message)
        self.index = index
        self.pixel = pixel


class MalformedComplex(MMPersistError, ValueError):
    pass


class DivisorTooSmall(MMPersistError, ValueError):
    pass


class ScaleMismatch(MMPersistError, ValueError):
    pass
