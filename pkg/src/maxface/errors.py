"""Exception hierarchy."""


class MaxfaceError(Exception):
    pass


class ValidationError(MaxfaceError, ValueError):
    """Input data violates a construction invariant."""


class NonRationalInput(ValidationError):
    pass


class NoRoots(MaxfaceError):
    pass


class RootFindingFailure(MaxfaceError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals


class UndefinedOrder(MaxfaceError):
    pass


class NotAPole(MaxfaceError):
    """Residue requested at a point that is not a pole (residue is zero by convention)."""


class QuadratureFailure(MaxfaceError):
    def __init__(self, msg, estimates=None):
        super().__init__(msg)
        self.estimates = estimates


class PathThroughSingularity(MaxfaceError):
    def __init__(self, msg, pole=None):
        super().__init__(msg)
        self.pole = pole


class InvalidDeformation(ValidationError):
    pass


class NotSingular(MaxfaceError):
    pass


class BadSeed(MaxfaceError):
    pass


class TracingStalled(MaxfaceError):
    def __init__(self, msg, last_point=None):
        super().__init__(msg)
        self.last_point = last_point


class InternalInconsistency(MaxfaceError):
    pass


class PeriodConditionFailed(MaxfaceError):
    pass


class BadPunctureGeometry(MaxfaceError):
    pass


class EmptyGrid(MaxfaceError):
    pass


class IOFailure(MaxfaceError, OSError):
    pass


class UsageError(MaxfaceError, ValueError):
    pass
