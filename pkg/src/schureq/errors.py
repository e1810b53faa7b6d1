"""Exception hierarchy shared by every module of the package."""


class SchurModelError(Exception):
    """Base class for all errors raised by :mod:`schureq`."""


class ZeroMeanError(SchurModelError):
    """An equilibrium level cannot be built because the previous level has mean 0.

    ``level`` is the order of the equilibrium distribution that could not be
    constructed (so a base distribution with zero mean fails at level 1).
    """

    def __init__(self, level: int, mean: float = 0.0):
        self.level = level
        self.mean = mean
        super().__init__(
            f"cannot build equilibrium level {level}: level {level - 1} has mean {mean!r}"
        )


class NonConvergentError(SchurModelError):
    """A truncation or moment computation exceeded its support budget."""


class ZeroVarianceError(SchurModelError):
    """The marginal distribution is degenerate, so a correlation is undefined."""


class UnsupportedDimensionError(SchurModelError):
    """The requested dimension is outside what an operation supports."""


class IntegrityError(SchurModelError):
    """A computed quantity violates a structural guarantee beyond rounding noise."""
