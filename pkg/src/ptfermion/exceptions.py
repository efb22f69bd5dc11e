"""Exception types raised by ptfermion."""


class DimensionError(ValueError):
    """Operand shapes do not fit together."""


class NotHermitianError(ValueError):
    pass


class EigenError(ArithmeticError):
    """Eigen-decomposition failed its residual certification."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class BrokenPhaseError(ValueError):
    """The requested quantity only exists in the unbroken PT phase."""


class ExceptionalPointError(BrokenPhaseError):
    """Parameters sit on (or within the exactness band of) an exceptional point."""


class InfeasibleConstraintError(ValueError):
    pass


class UnreachableTargetError(ValueError):
    pass


class NotDiscriminableError(ValueError):
    pass


class InvalidDensityMatrixError(ValueError):
    pass
