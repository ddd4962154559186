"""Exception hierarchy shared across the package."""


class OrdscoreError(Exception):
    """Base class for all errors raised by ordscore."""


class InvalidDegree(OrdscoreError):
    """Polynomial contrast degree outside 1..K-1."""


class InvalidKnots(OrdscoreError):
    """Spline knot parameters violate the ordering constraints."""


class DegenerateScores(OrdscoreError):
    """A score mapping produced numerically tied or non-finite scores."""


class InvalidProbability(OrdscoreError):
    """Quantile function evaluated outside the open interval (0, 1)."""


class SingularDesign(OrdscoreError):
    """Design matrix is rank deficient at the requested tolerance."""


class InsufficientData(OrdscoreError):
    """Fewer observations than design columns."""


class IrlsDidNotConverge(OrdscoreError):
    """IRLS failed to converge (includes separation-induced divergence)."""


class ConfigError(OrdscoreError):
    """Run configuration is malformed or inconsistent with the data."""


class DataError(OrdscoreError):
    """A data cell could not be used (unparseable, missing, unknown level)."""
