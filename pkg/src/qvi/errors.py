"""Exception types shared across the package."""


class QviError(Exception):
    """Base class for all qvi errors."""


class DomainError(QviError, ValueError):
    """An input lies outside the domain of a geometry or operator."""


class UnsupportedPairError(QviError, ValueError):
    """The requested (geometry, feasible set) projection has no closed form."""


class RangeError(QviError, ValueError):
    """A query point lies outside the available data range."""


class ConfigError(QviError, ValueError):
    """A run-configuration file failed to parse or validate.

    Carries the 1-based line number of the offending entry when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IntegrationDiverged(QviError, RuntimeError):
    """The ODE integration produced a non-finite state.

    The partial trajectory accumulated before the failure is attached as
    ``trajectory``.
    """

    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory
