"""Exception hierarchy shared by the solvers and the experiment runner."""


class PshLabError(Exception):
    """Base class for all errors raised by pshlab."""


class InvalidDomainError(PshLabError):
    pass


class EmptySetError(PshLabError):
    pass


class NotCompactlyContainedError(PshLabError):
    pass


class UnsupportedMeasureError(PshLabError):
    pass


class UnsupportedToricError(PshLabError):
    pass


class UnconvergedError(PshLabError):
    pass


class EmptyRegionError(PshLabError):
    pass


class InvalidRadiiError(PshLabError):
    pass


class PoolExhaustedError(PshLabError):
    pass


class ArityError(PshLabError):
    pass


class SandwichUnavailableError(PshLabError):
    """The product reduction needs A inside a polydisk inside Omega."""


class NearConstantError(PshLabError):
    pass


class EmptyCorpusError(PshLabError):
    pass


class GeometryError(PshLabError):
    """Probe balls violate the nesting hypothesis of a campaign."""


class ZeroMeasureError(PshLabError):
    pass


class NeedsScanError(PshLabError):
    pass


class ConfigError(PshLabError):
    """Invalid experiment configuration; carries the offending field."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
