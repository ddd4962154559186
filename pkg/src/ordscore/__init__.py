"""Data-driven numeric scores for ordered factors in regression models.

Ordered categorical predictors usually enter a linear predictor either as
integer scores 1..K or as a block of polynomial contrast columns.  This
package adds a third option: a single numeric score per level, generated by
a parametric monotone mapping (g-and-h quantiles or a monotone cubic
spline) whose parameters are chosen by minimizing the model's own fit
criterion.
"""

from .errors import (
    ConfigError,
    DataError,
    DegenerateScores,
    InsufficientData,
    InvalidDegree,
    InvalidKnots,
    InvalidProbability,
    IrlsDidNotConverge,
    OrdscoreError,
    SingularDesign,
)
from .factors import (
    OrderedFactor,
    contrast_names,
    expand_scores,
    integer_scores,
    polynomial_contrasts,
)
from .fitting import Family, FitResult, fit_glm, fit_ols
from .monospline import MonotoneCubic, SplineScoreParams, build_spline, eval_scores
from .optimizer import (
    FactorPlan,
    FactorTerm,
    GHMapping,
    IntegerMapping,
    ModelPlan,
    ModelSpec,
    OptimizedFit,
    PolyMapping,
    SplineMapping,
    build_design,
    compare_encodings,
    fit_model,
    from_theta,
    n_working,
    optimize_scores,
    scores_for,
    to_theta,
    variant_model,
)
from .quantiles import GHParams, gh_quantile, gh_scores, normal_quantile

__version__ = "0.1.0"

__all__ = [
    "OrdscoreError",
    "InvalidDegree",
    "InvalidKnots",
    "DegenerateScores",
    "InvalidProbability",
    "SingularDesign",
    "InsufficientData",
    "IrlsDidNotConverge",
    "ConfigError",
    "DataError",
    "OrderedFactor",
    "integer_scores",
    "polynomial_contrasts",
    "contrast_names",
    "expand_scores",
    "SplineScoreParams",
    "MonotoneCubic",
    "build_spline",
    "eval_scores",
    "GHParams",
    "normal_quantile",
    "gh_quantile",
    "gh_scores",
    "Family",
    "FitResult",
    "fit_ols",
    "fit_glm",
    "IntegerMapping",
    "PolyMapping",
    "GHMapping",
    "SplineMapping",
    "FactorTerm",
    "ModelSpec",
    "FactorPlan",
    "ModelPlan",
    "OptimizedFit",
    "n_working",
    "to_theta",
    "from_theta",
    "scores_for",
    "build_design",
    "fit_model",
    "optimize_scores",
    "variant_model",
    "compare_encodings",
]
