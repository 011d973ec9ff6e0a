"""Exception hierarchy shared by all puretomo modules."""


class TomographyError(ValueError):
    """Base class for every error raised by puretomo."""


class InvalidDimensionError(TomographyError):
    pass


class DimensionMismatchError(TomographyError):
    pass


class DomainError(TomographyError):
    """A scalar argument lies outside its allowed range."""


class InvalidStateError(TomographyError):
    """Amplitudes or matrix entries violate the state invariants."""


class InvalidProjectorError(TomographyError):
    pass


class DegenerateInputError(TomographyError):
    """Input carries no usable information (all-zero vector, zero matrix, empty reference)."""


class IncompleteDataError(TomographyError):
    pass


class InvalidModelError(TomographyError):
    pass


class UnsupportedDimensionError(TomographyError):
    pass
