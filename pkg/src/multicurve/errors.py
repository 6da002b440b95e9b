"""Exception hierarchy shared by every module."""


class MulticurveError(Exception):
    """Base class for all errors raised by the package."""


class Undetermined(MulticurveError):
    """The answer depends on the part of the surface outside the window.

    Callers should enlarge the window and retry.
    """


class InvalidSurface(MulticurveError, ValueError):
    pass


class NotAnEdge(MulticurveError, ValueError):
    pass


class NotMinimal(MulticurveError, ValueError):
    """Requested move between slopes that are not Farey-adjacent."""


class SisterConflict(MulticurveError, ValueError):
    """The frozen-chart model cannot represent the requested configuration."""


class NotFar(MulticurveError, ValueError):
    pass


class NotASquare(MulticurveError, ValueError):
    pass


class InvalidLoop(MulticurveError, ValueError):
    pass


class InvalidVertex(MulticurveError, ValueError):
    pass


class InsufficientWindow(MulticurveError):
    def __init__(self, message, minimal_window=None):
        super().__init__(message)
        self.minimal_window = minimal_window


class SchemaError(MulticurveError, ValueError):
    pass
