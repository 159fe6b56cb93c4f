"""Exception types shared across the package."""


class WeilformError(Exception):
    """Base class for package errors."""


class UnsupportedLevelError(WeilformError, ValueError):
    """The requested level has no registered seed data."""


class InsufficientOrderError(WeilformError, ValueError):
    """The truncation order is too small for a reliable computation."""


class InconsistencyError(WeilformError):
    """A mathematical invariant failed on computed data."""


class IntegralityError(WeilformError, ValueError):
    """A Borcherds lift input violates s(n)c(n) in Z on its principal part."""

    def __init__(self, n: int, value):
        super().__init__(f"s(n)c(n) = {value} is not an integer at n = {n}")
        self.n = n
        self.value = value
