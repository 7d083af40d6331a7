class SteinerLabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SteinerLabError, ValueError):
    """Malformed input: bad dimensions, out-of-range parameters, invalid structures."""


class CapExceeded(SteinerLabError):
    """An exact routine was asked to run beyond its configured size cap."""

    def __init__(self, cap_name, limit, actual):
        self.cap_name = cap_name
        self.limit = limit
        self.actual = actual
        super().__init__(f"{cap_name} cap exceeded: {actual} > {limit}")


class SolverError(SteinerLabError):
    """A numerical solver failed to converge or reported an unusable status."""
