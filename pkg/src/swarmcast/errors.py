"""Exception hierarchy shared by all swarmcast modules."""


class SwarmcastError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(SwarmcastError, ValueError):
    """Inconsistent or out-of-range argument."""


class ConstructionError(SwarmcastError):
    """A topology cannot be built with the requested node/edge counts."""


class NormalizationError(ConstructionError):
    """The edge count cannot be reached while keeping the graph connected."""


class GraphParseError(SwarmcastError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(SwarmcastError, ValueError):
    """Malformed scenario configuration."""


class DomainError(SwarmcastError, ValueError):
    """Argument outside the mathematical domain of a function."""


class AggregationError(SwarmcastError):
    """No usable Monte Carlo runs to aggregate."""


class ExperimentError(SwarmcastError):
    """A grid cell failed; the message names the cell."""
