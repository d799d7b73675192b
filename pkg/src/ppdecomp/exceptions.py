"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Input violates a documented precondition (non-finite data, bad range, ...)."""


class DimensionMismatch(ValueError):
    """Operands do not share the required dimensions."""


class BootstrapInfeasible(RuntimeError):
    """The rotational bootstrap cannot embed both view bases orthogonally.

    Raised when the selected marginal ranks satisfy ``r1 + r2 > n``. The
    remedy is to lower the marginal ranks (e.g. pick a scree-plot elbow and
    pass explicit ranks).
    """


class ParseError(ValueError):
    """A text input (CSV cell, config line) could not be parsed.

    Carries the 1-based ``line`` (and ``col`` when it applies) of the offending
    location.
    """

    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col
