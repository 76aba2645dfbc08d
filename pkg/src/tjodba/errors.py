"""Exception hierarchy shared by all modules."""


class TJError(Exception):
    """Base class for every error raised by :mod:`tjodba`."""


class NotHermitian(TJError, ValueError):
    pass


class ConvergenceFailure(TJError, RuntimeError):
    pass


class ToleranceNotMet(TJError, RuntimeError):
    pass


class RankDeficient(TJError, ValueError):
    pass


class InvalidSector(TJError, ValueError):
    pass


class PoleEncountered(TJError, ZeroDivisionError):
    pass


class SingularDenominator(PoleEncountered):
    pass


class SingularPrefactor(PoleEncountered):
    pass


class DegenerateEigenbasis(TJError, RuntimeError):
    pass


class NoConvergence(TJError, RuntimeError):
    pass


class ComplexEnergy(TJError, ValueError):
    pass


class UndefinedExponents(TJError, ValueError):
    pass


class InvalidOrder(TJError, ValueError):
    pass


class DomainError(TJError, ValueError):
    pass


class RegimeMismatch(TJError, ValueError):
    pass


class SingularAtHalf(TJError, ValueError):
    pass
