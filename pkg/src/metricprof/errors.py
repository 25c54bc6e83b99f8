"""Exception hierarchy shared by all modules."""


class MetricProfError(Exception):
    """Base class for every error raised by :mod:`metricprof`."""


class MetricError(MetricProfError, ValueError):
    """The alphabet distance is not a valid metric."""


class AsymmetricMetric(MetricError):
    pass


class NonzeroDiagonal(MetricError):
    pass


class ZeroOffDiagonal(MetricError):
    pass


class TriangleViolation(MetricError):
    def __init__(self, x, y, z, direct, detour):
        self.triple = (x, y, z)
        self.direct = direct
        self.detour = detour
        super().__init__(
            f"d({x},{z}) = {direct} > d({x},{y}) + d({y},{z}) = {detour}"
        )


class DegenerateAlphabet(MetricError):
    pass


class WildcardDistance(MetricProfError, ValueError):
    pass


class WrongMetricKind(MetricProfError, TypeError):
    pass


class OverflowRisk(MetricProfError, OverflowError):
    """Declared magnitudes exceed what an exact integer backend can represent."""


class BudgetExceeded(MetricProfError, RuntimeError):
    pass


class DivisionGuard(MetricProfError, ZeroDivisionError):
    pass
