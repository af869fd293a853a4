"""Exception types raised across the package."""


class QuantrepError(Exception):
    pass


class DenominatorNotInvertible(QuantrepError, ZeroDivisionError):
    """A coefficient denominator vanishes modulo the residue prime."""


class NoInvariantForm(QuantrepError):
    pass


class PrecisionExhausted(QuantrepError):
    """Sign of an embedded real number could not be decided at max precision."""


class MalformedGraph(QuantrepError, ValueError):
    pass


class BudgetExceeded(QuantrepError):
    pass


class SpectralBudgetExceeded(QuantrepError):
    pass


class DegenerateTriple(QuantrepError, ValueError):
    pass


class NonConvergent(QuantrepError):
    pass
