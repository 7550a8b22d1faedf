"""Exception hierarchy shared by all modules."""


class SarpfaError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(SarpfaError):
    """A radar/scene/config parameter violates its contract."""


class GeometryError(SarpfaError):
    """Geometry is degenerate or outside the supported regime."""


class DomainError(SarpfaError):
    """A signal array arrived in the wrong processing domain."""


class NumericError(SarpfaError):
    """A numerical step failed (no peak found, low correlation, ...)."""
