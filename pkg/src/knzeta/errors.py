"""Exception hierarchy shared by the library and the CLI exit codes."""


class KNError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class MalformedInputError(KNError, ValueError):
    exit_code = 2


class DimensionMismatchError(MalformedInputError):
    pass


class EmptyPolyhedronError(KNError, ValueError):
    """An operation needing a nonempty polyhedron received an empty one."""

    exit_code = 2


class DomainDegenerateError(KNError, ValueError):
    """The integration domain is not full-dimensional."""

    exit_code = 3


class UnsupportedDomainError(KNError):
    """At-infinity analysis was requested for a domain it does not cover."""

    exit_code = 4


class RegionError(KNError, ValueError):
    """Parameters lie outside the convergence region, or a path left it."""

    exit_code = 5

    def __init__(self, message: str, condition=None):
        super().__init__(message)
        self.condition = condition
