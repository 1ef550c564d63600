class LVError(Exception):
    """Base class for all errors raised by lvresilience."""


class InvalidParameters(LVError, ValueError):
    pass


class NotStrongCompetition(LVError):
    """Raised when alpha <= 1 or beta <= 1, so the coexistence point is not an interior saddle."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class OutOfDomain(LVError, ValueError):
    pass


class ManifoldEscape(LVError):
    """A backward branch of the stable manifold left its confining rectangle."""


class FCloseToZero(LVError, ZeroDivisionError):
    pass


class QuadratureFailure(LVError):
    pass


class OracleStall(LVError):
    pass


class SingularCoefficient(LVError):
    pass


class NumericalFailure(LVError):
    pass
