"""Exception hierarchy shared across the package."""


class FFHeightsError(Exception):
    """Base class for all library errors."""


class PolyParseError(FFHeightsError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotDivisibleError(FFHeightsError):
    """Exact polynomial division requested for a non-divisor."""


class SingularCurveError(FFHeightsError):
    """The Weierstrass data has identically zero discriminant."""


class NotOnCurveError(FFHeightsError):
    """A point operation received coordinates that do not satisfy the curve."""


class DivisorListError(FFHeightsError):
    """A user-supplied divisor factor list failed exact verification."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class PoleAtGamma(FFHeightsError):
    """Reduction was attempted at the hyperplane S0 = 0 where A, B have poles."""


class SingularReduction(FFHeightsError):
    """The discriminant vanishes identically along the chosen hypersurface."""


class DegreeCeilingExceeded(FFHeightsError):
    """A doubling iterate grew past the configured coordinate-degree ceiling."""

    def __init__(self, message: str, level: int, degree: int):
        super().__init__(message)
        self.level = level
        self.degree = degree


class QuadruplingDefectError(FFHeightsError):
    """An observed height defect exceeded the a-priori telescoping constant."""


class NonconvergenceError(FFHeightsError):
    """The rational-fiber height estimator hit its level cap before settling."""


class ConfigError(FFHeightsError):
    """Experiment configuration failed to parse or validate."""


class PreconditionError(FFHeightsError):
    """An operation was called outside its documented domain."""
