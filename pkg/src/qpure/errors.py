"""Exception types raised by qpure."""


class QpureError(ValueError):
    """Base class for all qpure errors."""


class NotSquare(QpureError):
    pass


class NotHermitian(QpureError):
    pass


class NotUnitary(QpureError):
    pass


class NotNormalized(QpureError):
    pass


class DimensionMismatch(QpureError):
    pass


class ShapeMismatch(QpureError):
    pass


class InvalidState(QpureError):
    """Matrix is not a density operator (not PSD or not unit trace)."""


class InvalidRank(QpureError):
    pass


class EmptySubspace(QpureError):
    pass


class NotTracePreserving(QpureError):
    pass


class AngleOutOfRange(QpureError):
    pass


class CollinearInputs(QpureError):
    """The two input vectors describe the same ray."""


class TargetTooLarge(QpureError):
    pass


class RecipeInconsistent(QpureError):
    pass


class TooFewStates(QpureError):
    pass


class POutOfRange(QpureError):
    pass


class NotFeasible(QpureError):
    pass
