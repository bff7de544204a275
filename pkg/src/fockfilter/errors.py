"""Exception hierarchy shared by every module."""


class FockFilterError(ValueError):
    """Base class for all library errors."""


class CutoffExceeded(FockFilterError):
    """Requested basis index lies outside the truncated space."""


class CutoffTooSmall(FockFilterError):
    """Truncation leaves too much probability mass near the cutoff."""


class DimensionMismatch(FockFilterError):
    pass


class ZeroVector(FockFilterError):
    pass


class NotNormalized(FockFilterError):
    pass


class DegenerateSplitter(FockFilterError):
    """Beam-splitter angle makes the configuration constant infinite."""


class ZeroProbability(FockFilterError):
    """Heralding event has (numerically) vanishing probability."""


class OperatorFormUndefined(FockFilterError):
    pass


class HoleUndefined(FockFilterError):
    """The Fock component to be removed is already (numerically) absent."""


class ParityUndefined(FockFilterError):
    pass


class UndefinedForVacuum(FockFilterError):
    pass
