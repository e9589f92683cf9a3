"""Exception hierarchy.

Errors split in two families so the CLI can map them to exit codes:
``UsageError`` subclasses (bad names, parameters, points) exit with 2,
``NumericalError`` subclasses (poles, quadrature, convergence) exit with 3.
"""


class WlabError(Exception):
    pass


class UsageError(WlabError):
    pass


class NumericalError(WlabError):
    pass


class PoleError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class SimplificationError(NumericalError):
    pass


class PoleOnPathError(NumericalError):
    pass


class QuadratureError(NumericalError):
    pass


class BranchPointError(NumericalError):
    pass


class FitAmbiguousError(NumericalError):
    pass


class TruncationError(NumericalError):
    pass


class DomainError(UsageError):
    pass


class UnknownSurfaceError(UsageError):
    pass


class ParamRangeError(UsageError):
    pass


class WeightMismatchError(UsageError):
    pass
