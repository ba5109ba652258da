"""Exception hierarchy shared by every preyloc module."""


class PreylocError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PreylocError, ValueError):
    pass


class MissingSymbol(ParameterError, KeyError):
    def __init__(self, symbol, family):
        self.symbol = symbol
        self.family = family
        super().__init__(f"missing parameter {symbol!r} for family {family}")

    def __str__(self):
        return self.args[0]


class UnknownSymbol(ParameterError):
    def __init__(self, symbol, family):
        self.symbol = symbol
        self.family = family
        super().__init__(f"unknown parameter {symbol!r} for family {family}")


class NonPositiveValue(ParameterError):
    def __init__(self, symbol, value):
        self.symbol = symbol
        self.value = value
        super().__init__(f"parameter {symbol!r} must be positive, got {value!r}")


class ConstraintViolation(ParameterError):
    """A cross-parameter constraint failed.

    ``constraint`` is a short machine tag such as ``"k<=b"``, ``"bk<=1"`` or
    ``"a<=c*rho"``.
    """

    def __init__(self, constraint, message):
        self.constraint = constraint
        super().__init__(f"ConstraintViolation({constraint}): {message}")


class OutOfDomain(PreylocError, ValueError):
    pass


class NullclineNonpositive(OutOfDomain):
    pass


class NoCEPAtCriticalPoint(PreylocError):
    pass


class PatternViolation(PreylocError):
    def __init__(self, message, sample=None):
        self.sample = sample
        super().__init__(message)


class NoConvergence(PreylocError):
    pass


class DegenerateCrossing(PreylocError):
    pass


class SpectralConditionFailure(PreylocError, ArithmeticError):
    """A closed-form bifurcation point failed re-verification on the full Jacobian."""


class NonFiniteState(PreylocError, FloatingPointError):
    pass


class InsufficientSamples(PreylocError, ValueError):
    pass


class EmptyLocus(PreylocError):
    pass
