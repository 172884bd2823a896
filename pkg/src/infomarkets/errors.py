"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """Exact enumeration would exceed the tuple budget.

    Raised instead of silently grinding through huge signal spaces; the
    caller should fall back to the Monte Carlo estimator in
    :mod:`infomarkets.montecarlo`.
    """


class NumericalError(RuntimeError):
    """A root bracket could not be established or a quadrature failed."""


class ProtocolError(ValueError):
    """A report stream violates the one-report-per-agent rule."""
