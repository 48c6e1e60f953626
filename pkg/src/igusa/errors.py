"""Exception hierarchy shared by all modules.

Every error carries a ``kind`` string which the CLI uses for its JSON error
envelope; domain errors map to exit code 2, convergence errors to exit code 3.
"""


class IgusaError(Exception):
    kind = "IgusaError"
    exit_code = 2

    def __init__(self, detail="", **extra):
        super().__init__(detail)
        self.detail = detail
        self.extra = extra


class ParseError(IgusaError):
    kind = "ParseError"

    def __init__(self, detail="", position=None):
        super().__init__(detail, position=position)
        self.position = position


class UnknownVariable(ParseError):
    kind = "UnknownVariable"


class ZeroSeries(IgusaError, ZeroDivisionError):
    kind = "ZeroSeries"


class CoefficientModeError(IgusaError, TypeError):
    kind = "CoefficientModeError"


class DegenerateSimplex(IgusaError):
    kind = "DegenerateSimplex"


class DomainFormatError(IgusaError):
    kind = "DomainFormatError"


class NegativeIntegrand(IgusaError):
    kind = "NegativeIntegrand"


class RadiusExceeded(IgusaError):
    kind = "RadiusExceeded"


class InsufficientMoments(IgusaError):
    kind = "InsufficientMoments"


class NotFound(IgusaError):
    kind = "NotFound"


class AmbiguousRelation(IgusaError):
    kind = "AmbiguousRelation"


class PoleAt(IgusaError):
    kind = "PoleAt"


class ConvergenceError(IgusaError):
    kind = "ConvergenceError"
    exit_code = 3


class NotConverged(ConvergenceError):
    kind = "NotConverged"

    def __init__(self, detail="", result=None):
        super().__init__(detail)
        self.result = result


class OrderExhausted(ConvergenceError):
    kind = "OrderExhausted"
