"""Exception types shared across the package."""


class WisSdeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(WisSdeError):
    """Invalid configuration: bad parameter combinations, missing drift
    derivatives, divisibility violations, malformed config files."""


class NumericOverflowError(WisSdeError):
    """An exponent magnitude exceeded the safe range (|arg| > 700).

    Raised instead of silently returning inf so extreme-parameter sweeps
    fail loudly.
    """


class EmbeddingError(WisSdeError):
    """Circulant embedding produced a negative eigenvalue beyond tolerance.

    Carries the offending eigenvalue; callers may retry with the dense
    Cholesky sampler.
    """

    def __init__(self, eigenvalue: float, tolerance: float):
        self.eigenvalue = eigenvalue
        self.tolerance = tolerance
        super().__init__(
            f"circulant embedding failed: eigenvalue {eigenvalue!r} below "
            f"-{tolerance!r}; retry with the Cholesky sampler"
        )
