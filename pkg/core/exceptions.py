# core/exceptions.py
"""Error types raised by the numerical apps.

Every error is also a ``ValueError`` so callers that only care about bad
input can catch that instead.
"""


class SimulationError(Exception):
    """Base class for all errors raised while simulating a trial."""


class InvalidShapeError(SimulationError, ValueError):
    pass


class DegenerateGeometryError(SimulationError, ValueError):
    pass


class InvalidReflectionError(SimulationError, ValueError):
    pass


class DimensionMismatchError(SimulationError, ValueError):
    pass


class IndexOutOfRangeError(SimulationError, IndexError):
    pass


class SingularSystemError(SimulationError, ValueError):
    pass


class EmptyGridError(SimulationError, ValueError):
    pass


class NoSignalError(SimulationError, ValueError):
    pass


class ZeroChannelError(SimulationError, ValueError):
    pass


class UndefinedRatioError(SimulationError, ValueError):
    pass
