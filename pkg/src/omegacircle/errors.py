"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A parameter lies outside the documented domain."""


class OutOfRange(InvalidArgument):
    """An integer argument falls outside the sieve range."""


class ConfigurationError(InvalidArgument):
    """Inputs are individually valid but inconsistent (e.g. a missing coefficient)."""


class FitError(RuntimeError):
    """Least-squares fit cannot be trusted (ill-conditioned design)."""


class PrecisionError(ArithmeticError):
    """An exactness guarantee cannot be certified for the given inputs."""
