"""Exception hierarchy.

Every error raised by the library derives from :class:`MedshiftError`, and
all value-related errors also derive from :class:`ValueError` so callers can
catch them the usual way.
"""


class MedshiftError(Exception):
    """Base class for all library errors."""


class InputError(MedshiftError, ValueError):
    """Base class for malformed or out-of-contract inputs."""


class EmptyInput(InputError):
    pass


class NegativeMass(InputError):
    pass


class NotNormalized(InputError):
    pass


class ZeroTotal(InputError):
    pass


class NonMonotone(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InvalidHistogram(InputError):
    pass


class EmptySet(InputError):
    pass


class LengthMismatch(InputError):
    pass


class TooFewPoints(InputError):
    pass


class InvalidConfig(InputError):
    pass


class EmptySeries(InputError):
    pass


class EmptyRange(InputError):
    pass


class ParseError(InputError):
    pass


class MissingParameter(InputError):
    pass


class EngineError(MedshiftError):
    """Base class for failures raised while running an algorithm."""


class EmptyActiveSet(EngineError):
    """No data point lies strictly within the bandwidth of the iterate."""


class KTooLarge(EngineError, ValueError):
    pass


class DegenerateInit(EngineError):
    pass
