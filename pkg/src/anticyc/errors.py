"""Exception hierarchy shared across the package."""


class AnticycError(Exception):
    """Base class; ``exit_code`` is used by the command-line driver."""

    exit_code = 4


class PrecisionError(AnticycError):
    exit_code = 3


class PrecisionExhausted(PrecisionError):
    pass


class DivisionByIndistinguishableZero(PrecisionError, ZeroDivisionError):
    pass


class OutsideConvergenceDomain(AnticycError, ValueError):
    pass


class HypothesisViolation(AnticycError, ValueError):
    exit_code = 2

    def __init__(self, bullet, detail=""):
        self.bullet = bullet
        super().__init__(f"{bullet}: {detail}" if detail else bullet)


class NotFundamental(HypothesisViolation):
    def __init__(self, detail=""):
        super().__init__("not fundamental", detail)


class UnitObstruction(HypothesisViolation):
    def __init__(self, detail=""):
        super().__init__("unit obstruction", detail)


class NotRamified(HypothesisViolation):
    def __init__(self, detail=""):
        super().__init__("p not ramified", detail)


class BadDiscriminant(HypothesisViolation):
    def __init__(self, detail=""):
        super().__init__("odd factor count", detail)


class LevelNotCoprime(HypothesisViolation):
    def __init__(self, detail=""):
        super().__init__("level not coprime", detail)


class DepthExceeded(AnticycError):
    pass


class InfiniteOrder(AnticycError, ValueError):
    pass


class DegenerateDomain(AnticycError):
    pass


class BadHeckePrime(AnticycError, ValueError):
    pass


class EigenspaceNotFound(AnticycError):
    pass


class EigenspaceNotLine(AnticycError):
    pass


class UnsupportedWeight(AnticycError, NotImplementedError):
    pass


class CountMismatch(AnticycError):
    pass


class ConjugatorNotFound(AnticycError):
    pass


class IdealNotCoprime(AnticycError, ValueError):
    pass


class RouteDisagreement(PrecisionError):
    pass


class NotMultiplicative(AnticycError, ValueError):
    pass


class UniformizationFailed(AnticycError):
    pass


class OrbitIncomplete(AnticycError, ValueError):
    pass


class NoMatch(AnticycError):
    pass


class SampleAtPole(AnticycError):
    pass


class NonUnitSample(AnticycError):
    pass


class CacheError(AnticycError):
    pass


class VersionMismatch(CacheError):
    pass


class CorruptCache(CacheError):
    pass
